#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ksgen/scene.hpp"
#include "test_util.hpp"

using namespace ksgen;

namespace {

FrameSequence hard_cut_sequence(int before, int after) {
  FrameSequence seq;
  seq.fps = 30.0;
  for (int i = 0; i < before; ++i) seq.frames.push_back(make_frame(16, 16, 0, 0, 0));
  for (int i = 0; i < after; ++i) seq.frames.push_back(make_frame(16, 16, 255, 255, 255));
  return seq;
}

}  // namespace

TEST_CASE("hard cut detected at the planted index") {
  const auto cuts = detect_transitions(hard_cut_sequence(30, 30), {0.5, 0.5, 0.5});
  CHECK(cuts == std::vector<uint64_t>{30});
}

TEST_CASE("constant clip yields no cuts") {
  FrameSequence seq;
  seq.fps = 30.0;
  for (int i = 0; i < 40; ++i) seq.frames.push_back(make_frame(16, 16, 128, 10, 50));
  CHECK(detect_transitions(seq, {0.5, 0.5, 0.5}).empty());
}

TEST_CASE("gap-4 comparison fires on a fade where adjacent frames do not") {
  // slow brightening of a gradient image; adjacent histogram steps are
  // small, but a 5-frame span moves far more mass across bins
  FrameSequence seq;
  seq.fps = 30.0;
  for (int i = 0; i < 60; ++i) {
    Frame f = make_frame(16, 16);
    for (int y = 0; y < 16; ++y)
      for (int x = 0; x < 16; ++x) {
        const auto v = static_cast<uint8_t>(std::min(255, (x * 16 + y) / 2 + i * 2));
        for (int c = 0; c < 3; ++c) f.px(y, x)[c] = v;
      }
    seq.frames.push_back(f);
  }
  std::vector<Histogram256> hists;
  for (const auto& f : seq.frames) hists.push_back(color_histogram(f));

  // brute-force all three distances to pick a threshold separating them
  double max_adjacent = 0.0, max_gap4 = 0.0;
  for (size_t i = 0; i + 1 < hists.size(); ++i)
    max_adjacent = std::max(max_adjacent, l1_distance(hists[i], hists[i + 1]));
  for (size_t i = 0; i + 5 < hists.size(); ++i)
    max_gap4 = std::max(max_gap4, l1_distance(hists[i], hists[i + 5]));
  REQUIRE(max_gap4 > max_adjacent);
  const double thr = (max_adjacent + max_gap4) / 2.0;

  const auto adjacent_only = detect_transitions(hists, {thr, 1e9, 1e9});
  const auto gap4_only = detect_transitions(hists, {1e9, 1e9, thr});
  CHECK(adjacent_only.empty());
  CHECK_FALSE(gap4_only.empty());
}

TEST_CASE("detection is shift covariant") {
  std::mt19937 rng(53);
  auto seq = hard_cut_sequence(20, 20);
  const auto base = detect_transitions(seq, {0.5, 0.5, 0.5});
  FrameSequence shifted;
  shifted.fps = seq.fps;
  for (int i = 0; i < 7; ++i) shifted.frames.push_back(seq.frames.front());
  for (const auto& f : seq.frames) shifted.frames.push_back(f);
  const auto moved = detect_transitions(shifted, {0.5, 0.5, 0.5});
  REQUIRE(moved.size() == base.size());
  for (size_t i = 0; i < base.size(); ++i) CHECK(moved[i] == base[i] + 7);
}

TEST_CASE("span gap mode compares (i, i+2) and (i, i+4)") {
  // two-frame alternation: adjacent frames differ, two-apart frames agree
  FrameSequence seq;
  seq.fps = 30.0;
  for (int i = 0; i < 20; ++i)
    seq.frames.push_back(i % 2 ? make_frame(8, 8, 255, 255, 255) : make_frame(8, 8, 0, 0, 0));
  const auto span_cuts = detect_transitions(seq, {1e9, 0.5, 0.5}, GapMode::Span);
  CHECK(span_cuts.empty());
  const auto between_cuts = detect_transitions(seq, {1e9, 0.5, 0.5}, GapMode::Between);
  CHECK_FALSE(between_cuts.empty());
}

TEST_CASE("split on transitions covers the range") {
  const auto subs = split_on_transitions(60, {30}, "c");
  REQUIRE(subs.size() == 2);
  CHECK(subs[0].start_frame == 0);
  CHECK(subs[0].end_frame == 30);
  CHECK(subs[1].start_frame == 30);
  CHECK(subs[1].end_frame == 60);

  const auto whole = split_on_transitions(60, {});
  REQUIRE(whole.size() == 1);
  CHECK(whole[0].length() == 60);

  CHECK_THROWS_AS(split_on_transitions(10, {10}), RangeError);
}

TEST_CASE("cap duration splits long subclips") {
  const auto a = cap_duration({{0, 150, "c"}}, 30.0);
  REQUIRE(a.size() == 3);
  CHECK(a[0].end_frame == 60);
  CHECK(a[1].end_frame == 120);
  CHECK(a[2].end_frame == 150);

  const auto b = cap_duration({{0, 45, "c"}}, 30.0);
  REQUIRE(b.size() == 1);
  CHECK(b[0].length() == 45);

  const auto c = cap_duration({{0, 61, "c"}}, 30.0);
  REQUIRE(c.size() == 2);
  CHECK(c[0].length() == 60);
  CHECK(c[1].length() == 1);
}

TEST_CASE("cap preserves frame count and honors the bound") {
  std::mt19937 rng(59);
  std::uniform_int_distribution<uint64_t> len(1, 400);
  for (int it = 0; it < 50; ++it) {
    uint64_t start = 0;
    std::vector<Subclip> subs;
    for (int i = 0; i < 5; ++i) {
      const uint64_t l = len(rng);
      subs.push_back({start, start + l, "c"});
      start += l;
    }
    const double fps = 30.0;
    const auto capped = cap_duration(subs, fps, 2.0);
    uint64_t total = 0, prev_end = 0;
    for (const auto& s : capped) {
      CHECK(s.length() <= 60);
      CHECK(s.start_frame == prev_end);
      prev_end = s.end_frame;
      total += s.length();
    }
    CHECK(total == start);
  }
}

TEST_CASE("subclips from detection contain no residual hard transition") {
  const auto seq = hard_cut_sequence(25, 35);
  std::vector<Histogram256> hists;
  for (const auto& f : seq.frames) hists.push_back(color_histogram(f));
  const std::array<double, 3> thr{0.5, 0.5, 0.5};
  const auto cuts = detect_transitions(hists, thr);
  const auto subs = split_on_transitions(seq.size(), cuts);
  static constexpr int kGaps[3] = {0, 2, 4};
  for (const auto& s : subs) {
    for (int gi = 0; gi < 3; ++gi) {
      const size_t span = kGaps[gi] + 1;
      for (uint64_t i = s.start_frame; i + span < s.end_frame; ++i)
        CHECK(l1_distance(hists[i], hists[i + span]) <= thr[gi]);
    }
  }
}
