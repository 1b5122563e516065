#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ksgen/select.hpp"
#include "test_util.hpp"

using namespace ksgen;

namespace {

// Independent exhaustive scan used as the oracle for both selectors.
struct BruteBest {
  size_t start = 0;
  double score = 0.0;
  bool valid = false;
};

BruteBest brute_force_best(const std::vector<double>& scores, size_t window, size_t stride,
                           bool lower_is_better) {
  BruteBest best;
  for (size_t s = 0; s + window <= scores.size(); s += stride) {
    double acc = 0.0;
    for (size_t i = s; i < s + window; ++i) acc += scores[i];
    const double mean = acc / static_cast<double>(window);
    const bool better =
        !best.valid || (lower_is_better ? mean < best.score : mean > best.score);
    if (better) {
      best = {s, mean, true};
    }
  }
  return best;
}

}  // namespace

TEST_CASE("flow-kl selector on template-equal histograms") {
  const auto tmpl = gaussian_mixture_template(FlowTemplateParams{});
  std::vector<Histogram256> hists(24, tmpl);
  const auto res = select_by_flow_kl(hists, tmpl, 8, 2, 0.5);
  REQUIRE(res.best.has_value());
  CHECK(res.best->start_frame == 0);
  CHECK(res.best->score == Catch::Approx(0.0).margin(1e-12));
  CHECK(res.accepted.size() == 9);  // starts 0,2,...,16
}

TEST_CASE("flow-kl selector finds a planted template run") {
  const auto tmpl = gaussian_mixture_template(FlowTemplateParams{});
  std::vector<Histogram256> hists(32, testutil::one_hot_histogram(255));
  for (int i = 8; i < 24; ++i) hists[i] = tmpl;
  const auto res = select_by_flow_kl(hists, tmpl, 16, 1, 1e-6);
  REQUIRE(res.best.has_value());
  CHECK(res.best->start_frame == 8);
}

TEST_CASE("negative threshold rejects all windows but still reports best") {
  const auto tmpl = gaussian_mixture_template(FlowTemplateParams{});
  std::vector<Histogram256> hists(16, tmpl);
  const auto res = select_by_flow_kl(hists, tmpl, 8, 1, -1.0);
  CHECK(res.accepted.empty());
  CHECK(res.best.has_value());
}

TEST_CASE("window longer than clip rejected") {
  const auto tmpl = gaussian_mixture_template(FlowTemplateParams{});
  std::vector<Histogram256> hists(4, tmpl);
  CHECK_THROWS_AS(select_by_flow_kl(hists, tmpl, 8, 1, 1.0), WindowError);
}

TEST_CASE("semantic selector on identical embeddings") {
  TensorFile frames, text;
  text.shape = {4};
  text.data = {1.0f, 2.0f, 3.0f, 4.0f};
  frames.shape = {10, 4};
  for (int t = 0; t < 10; ++t)
    frames.data.insert(frames.data.end(), text.data.begin(), text.data.end());
  const auto res = select_by_semantic(frames, text, 4, 1, 0.5);
  REQUIRE(res.best.has_value());
  CHECK(res.best->score == Catch::Approx(1.0));
  CHECK(res.accepted.size() == 7);
}

TEST_CASE("semantic selector prefers the aligned half") {
  TensorFile frames, text;
  text.shape = {2};
  text.data = {1.0f, 0.0f};
  frames.shape = {16, 2};
  frames.data.resize(32, 0.0f);
  for (int t = 0; t < 8; ++t) frames.data[2 * t + 1] = 1.0f;   // orthogonal
  for (int t = 8; t < 16; ++t) frames.data[2 * t] = 1.0f;      // parallel
  const auto res = select_by_semantic(frames, text, 8, 1, 0.9);
  REQUIRE(res.best.has_value());
  CHECK(res.best->start_frame == 8);
  CHECK(res.best->score == Catch::Approx(1.0));
}

TEST_CASE("semantic selector rejects zero-norm vectors") {
  TensorFile frames, text;
  text.shape = {2};
  text.data = {1.0f, 0.0f};
  frames.shape = {2, 2};
  frames.data = {0.0f, 0.0f, 1.0f, 0.0f};
  CHECK_THROWS_AS(select_by_semantic(frames, text, 1, 1, 0.5), NormError);
}

TEST_CASE("selectors match the brute-force oracle on random instances") {
  std::mt19937 rng(61);
  std::uniform_int_distribution<size_t> len_d(4, 64);
  std::uniform_real_distribution<float> val(-1.0f, 1.0f);
  const auto tmpl = gaussian_mixture_template(FlowTemplateParams{});
  for (int it = 0; it < 60; ++it) {
    const size_t T = len_d(rng);
    const size_t window = 1 + rng() % T;
    const size_t stride = 1 + rng() % 4;

    // flow side
    std::vector<Histogram256> hists;
    std::vector<double> kls;
    for (size_t i = 0; i < T; ++i) {
      hists.push_back(testutil::random_histogram(rng));
      kls.push_back(kl_divergence(hists.back(), tmpl));
    }
    const auto flow_res = select_by_flow_kl(hists, tmpl, window, stride, 0.5);
    const auto flow_ref = brute_force_best(kls, window, stride, true);
    REQUIRE(flow_res.best.has_value());
    CHECK(flow_res.best->start_frame == flow_ref.start);
    CHECK(flow_res.best->score == Catch::Approx(flow_ref.score).margin(1e-12));

    // semantic side
    TensorFile frames, text;
    const size_t D = 6;
    text.shape = {D};
    for (size_t j = 0; j < D; ++j) text.data.push_back(val(rng) + 2.0f);
    frames.shape = {T, D};
    std::vector<double> sims;
    for (size_t i = 0; i < T; ++i) {
      std::vector<float> row;
      for (size_t j = 0; j < D; ++j) row.push_back(val(rng) + 2.0f);
      frames.data.insert(frames.data.end(), row.begin(), row.end());
      sims.push_back(cosine(row, text.data));
    }
    const auto sem_res = select_by_semantic(frames, text, window, stride, 0.5);
    const auto sem_ref = brute_force_best(sims, window, stride, false);
    REQUIRE(sem_res.best.has_value());
    CHECK(sem_res.best->start_frame == sem_ref.start);
    CHECK(sem_res.best->score == Catch::Approx(sem_ref.score).margin(1e-12));
  }
}

TEST_CASE("accepted sets are monotone in the threshold") {
  std::mt19937 rng(67);
  const auto tmpl = gaussian_mixture_template(FlowTemplateParams{});
  std::vector<Histogram256> hists;
  for (int i = 0; i < 32; ++i) hists.push_back(testutil::random_histogram(rng));
  size_t prev = 0;
  for (double thr : {0.0, 0.5, 1.0, 2.0, 10.0}) {
    const auto res = select_by_flow_kl(hists, tmpl, 8, 2, thr);
    CHECK(res.accepted.size() >= prev);
    prev = res.accepted.size();
  }
}

TEST_CASE("best window invariant to positive rescaling of embeddings") {
  std::mt19937 rng(71);
  std::uniform_real_distribution<float> val(-1.0f, 1.0f);
  TensorFile frames, text, frames2;
  const size_t T = 20, D = 5;
  text.shape = {D};
  for (size_t j = 0; j < D; ++j) text.data.push_back(val(rng) + 1.5f);
  frames.shape = {T, D};
  for (size_t i = 0; i < T * D; ++i) frames.data.push_back(val(rng) + 1.5f);
  frames2 = frames;
  for (auto& v : frames2.data) v *= 37.5f;
  const auto a = select_by_semantic(frames, text, 6, 1, 0.9);
  const auto b = select_by_semantic(frames2, text, 6, 1, 0.9);
  REQUIRE(a.best.has_value());
  REQUIRE(b.best.has_value());
  CHECK(a.best->start_frame == b.best->start_frame);
}

TEST_CASE("text coverage filter") {
  std::vector<float> zeros(10, 0.0f);
  auto res = filter_text_heavy(zeros, 0.2);
  CHECK(res.keep);
  CHECK(res.mean_coverage == 0.0);

  std::vector<float> heavy(10, 0.3f);
  res = filter_text_heavy(heavy, 0.2);
  CHECK_FALSE(res.keep);
  CHECK(res.mean_coverage == Catch::Approx(0.3));

  std::vector<float> exact(10, 0.2f);
  CHECK(filter_text_heavy(exact, 0.2f).keep);  // boundary keeps

  std::vector<float> bad = {0.5f, 1.5f};
  CHECK_THROWS_AS(filter_text_heavy(bad, 0.2), RangeError);
}
