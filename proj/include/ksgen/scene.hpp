#pragma once

// Scene-transition detection and subclip segmentation, including the
// two-second cap.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ksgen/errors.hpp"
#include "ksgen/histogram.hpp"
#include "ksgen/image.hpp"

namespace ksgen {

struct Subclip {
  uint64_t start_frame = 0;
  uint64_t end_frame = 0;  // exclusive
  std::string source_clip_id;

  uint64_t length() const { return end_frame - start_frame; }
};

enum class GapMode {
  Between,  // gap g means g frames strictly between: pairs (i, i+1+g)
  Span,     // pairs (i, i+g), g > 0
};

// Multi-gap detection: histogram pairs at gaps {0, 2, 4} flag a candidate
// transition region; overlapping regions merge and each merged region is
// localized at the frame with the largest adjacent-frame distance.
// A cut index c marks the boundary before frame c.
inline std::vector<uint64_t> detect_transitions(const std::vector<Histogram256>& hists,
                                                const std::array<double, 3>& thresholds,
                                                GapMode mode = GapMode::Between) {
  const size_t len = hists.size();
  if (len < 2) return {};
  static constexpr int kGaps[3] = {0, 2, 4};
  std::vector<char> candidate(len, 0);  // index = cut position, 1..len-1 usable
  for (int gi = 0; gi < 3; ++gi) {
    const int g = kGaps[gi];
    const size_t span = (mode == GapMode::Between) ? static_cast<size_t>(g) + 1
                                                   : std::max<size_t>(1, g);
    for (size_t i = 0; i + span < len; ++i) {
      if (l1_distance(hists[i], hists[i + span]) > thresholds[gi]) {
        for (size_t c = i + 1; c <= i + span; ++c) candidate[c] = 1;
      }
    }
  }
  std::vector<uint64_t> cuts;
  size_t c = 1;
  while (c < len) {
    if (!candidate[c]) {
      ++c;
      continue;
    }
    size_t run_end = c;
    while (run_end + 1 < len && candidate[run_end + 1]) ++run_end;
    size_t best = c;
    double best_d = -1.0;
    for (size_t k = c; k <= run_end; ++k) {
      const double d = l1_distance(hists[k - 1], hists[k]);
      if (d > best_d) {
        best_d = d;
        best = k;
      }
    }
    cuts.push_back(best);
    c = run_end + 1;
  }
  return cuts;
}

inline std::vector<uint64_t> detect_transitions(const FrameSequence& seq,
                                                const std::array<double, 3>& thresholds,
                                                GapMode mode = GapMode::Between) {
  std::vector<Histogram256> hists;
  hists.reserve(seq.frames.size());
  for (const auto& f : seq.frames) hists.push_back(color_histogram(f));
  return detect_transitions(hists, thresholds, mode);
}

inline std::vector<Subclip> split_on_transitions(uint64_t seq_len,
                                                 const std::vector<uint64_t>& cuts,
                                                 const std::string& clip_id = "") {
  uint64_t prev = 0;
  std::vector<Subclip> out;
  for (uint64_t c : cuts) {
    if (c <= prev || c >= seq_len) throw RangeError("cut out of range");
    out.push_back({prev, c, clip_id});
    prev = c;
  }
  out.push_back({prev, seq_len, clip_id});
  return out;
}

// Splits every subclip longer than max_sec into left-to-right pieces of at
// most floor(max_sec * fps) frames; trailing remainders are kept.
inline std::vector<Subclip> cap_duration(const std::vector<Subclip>& subclips, double fps,
                                         double max_sec = 2.0) {
  if (!(fps > 0.0)) throw RangeError("fps must be > 0");
  const uint64_t max_frames =
      std::max<uint64_t>(1, static_cast<uint64_t>(std::floor(max_sec * fps)));
  std::vector<Subclip> out;
  for (const auto& s : subclips) {
    uint64_t start = s.start_frame;
    while (start < s.end_frame) {
      const uint64_t end = std::min(s.end_frame, start + max_frames);
      out.push_back({start, end, s.source_clip_id});
      start = end;
    }
  }
  return out;
}

}  // namespace ksgen
