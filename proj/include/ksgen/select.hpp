#pragma once

// The three content filters: flow-KL sliding-window selection, semantic
// sliding-window selection, and text-coverage rejection.

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ksgen/errors.hpp"
#include "ksgen/histogram.hpp"
#include "ksgen/tensor.hpp"

namespace ksgen {

struct WindowScore {
  uint64_t start_frame = 0;
  uint64_t end_frame = 0;  // exclusive
  double score = 0.0;
};

struct SelectionResult {
  std::vector<WindowScore> accepted;
  std::optional<WindowScore> best;
};

enum class WindowPooling { Mean, Max };

namespace detail {

// Scans windows of per-element scores at starts 0, stride, 2*stride, ...
// `lower_is_better` fixes both the acceptance direction and the argbest.
inline SelectionResult scan_windows(const std::vector<double>& scores, size_t window_len,
                                    size_t stride, double threshold, bool lower_is_better,
                                    WindowPooling pooling) {
  if (stride < 1) throw WindowError("stride must be >= 1");
  if (window_len < 1 || window_len > scores.size())
    throw WindowError("window longer than clip");
  SelectionResult res;
  for (size_t s = 0; s + window_len <= scores.size(); s += stride) {
    double score;
    if (pooling == WindowPooling::Mean) {
      double acc = 0.0;
      for (size_t i = s; i < s + window_len; ++i) acc += scores[i];
      score = acc / static_cast<double>(window_len);
    } else {
      score = scores[s];
      for (size_t i = s + 1; i < s + window_len; ++i) score = std::max(score, scores[i]);
    }
    WindowScore w{s, s + window_len, score};
    const bool pass = lower_is_better ? score <= threshold : score >= threshold;
    if (pass) res.accepted.push_back(w);
    const bool better =
        !res.best || (lower_is_better ? score < res.best->score : score > res.best->score);
    if (better) res.best = w;  // ties keep the earliest start
  }
  return res;
}

}  // namespace detail

enum class KlDirection { ClipToTemplate, TemplateToClip };

// Window score = mean per-pair KL against the template; low scores mean
// template-like motion, so acceptance is score <= threshold.
inline SelectionResult select_by_flow_kl(const std::vector<Histogram256>& per_pair_hists,
                                         const Histogram256& tmpl, size_t window_len,
                                         size_t stride, double threshold,
                                         KlDirection direction = KlDirection::ClipToTemplate,
                                         WindowPooling pooling = WindowPooling::Mean) {
  std::vector<double> kls;
  kls.reserve(per_pair_hists.size());
  for (const auto& h : per_pair_hists)
    kls.push_back(direction == KlDirection::ClipToTemplate ? kl_divergence(h, tmpl)
                                                           : kl_divergence(tmpl, h));
  return detail::scan_windows(kls, window_len, stride, threshold, /*lower_is_better=*/true,
                              pooling);
}

inline double cosine(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size()) throw ShapeError("dimension mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    dot += static_cast<double>(a[i]) * b[i];
    na += static_cast<double>(a[i]) * a[i];
    nb += static_cast<double>(b[i]) * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw NormError("zero-norm vector");
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

// Per-frame cosine similarity to the step text embedding; window score is
// the mean, acceptance is score >= threshold.
inline SelectionResult select_by_semantic(const TensorFile& frame_embeddings,
                                          const TensorFile& text_embedding,
                                          size_t window_len, size_t stride,
                                          double threshold,
                                          WindowPooling pooling = WindowPooling::Mean) {
  if (frame_embeddings.shape.size() != 2)
    throw ShapeError("frame embeddings must be (T, D)");
  if (text_embedding.shape.size() != 1)
    throw ShapeError("text embedding must be (D,)");
  const size_t T = frame_embeddings.shape[0];
  const size_t D = frame_embeddings.shape[1];
  if (text_embedding.shape[0] != D) throw ShapeError("embedding dims differ");
  std::vector<double> sims;
  sims.reserve(T);
  std::span<const float> text(text_embedding.data);
  for (size_t t = 0; t < T; ++t)
    sims.push_back(cosine({frame_embeddings.data.data() + t * D, D}, text));
  return detail::scan_windows(sims, window_len, stride, threshold, /*lower_is_better=*/false,
                              pooling);
}

struct TextFilterResult {
  bool keep = false;
  double mean_coverage = 0.0;
};

// keep iff mean coverage <= threshold.
inline TextFilterResult filter_text_heavy(std::span<const float> coverage, double threshold) {
  if (coverage.empty()) throw EmptyError("empty coverage vector");
  double acc = 0.0;
  for (float v : coverage) {
    if (v < 0.0f || v > 1.0f) throw RangeError("coverage value outside [0,1]");
    acc += v;
  }
  const double mean = acc / static_cast<double>(coverage.size());
  return {mean <= threshold, mean};
}

}  // namespace ksgen
