#pragma once

// 256-bin histograms: joint-RGB color histograms for shot boundaries,
// log2-scale flow magnitude histograms on [-7, 5], the two-Gaussian motion
// template, and the L1 / KL comparison kernels.

#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "ksgen/errors.hpp"
#include "ksgen/flow_field.hpp"
#include "ksgen/image.hpp"

namespace ksgen {

inline constexpr int kHistBins = 256;
inline constexpr double kLogMagMin = -7.0;  // log2 of smallest magnitude bin edge
inline constexpr double kLogMagMax = 5.0;
inline constexpr double kLogBinWidth = (kLogMagMax - kLogMagMin) / kHistBins;

struct Histogram256 {
  std::array<double, kHistBins> bins{};
  bool normalized = false;

  double sum() const { return std::accumulate(bins.begin(), bins.end(), 0.0); }

  Histogram256& normalize() {
    const double s = sum();
    if (s > 0.0)
      for (double& b : bins) b /= s;
    normalized = true;
    return *this;
  }
};

// Joint RGB quantization, 8x8x4 levels.
inline int color_bin(uint8_t r, uint8_t g, uint8_t b) {
  return (r >> 5) * 32 + (g >> 5) * 4 + (b >> 6);
}

inline Histogram256 color_histogram(const Frame& f) {
  Histogram256 h;
  const size_t n = static_cast<size_t>(f.height) * f.width;
  for (size_t i = 0; i < n; ++i) {
    const uint8_t* p = f.rgb.data() + 3 * i;
    h.bins[color_bin(p[0], p[1], p[2])] += 1.0;
  }
  for (double& b : h.bins) b /= static_cast<double>(n);
  h.normalized = true;
  return h;
}

inline double l1_distance(const Histogram256& a, const Histogram256& b) {
  if (!a.normalized || !b.normalized)
    throw NormalizationError("l1_distance requires normalized histograms");
  double d = 0.0;
  for (int i = 0; i < kHistBins; ++i) d += std::abs(a.bins[i] - b.bins[i]);
  return d;
}

inline int flow_mag_bin(double m) {
  if (m <= 0.0) return 0;
  const double l = std::log2(m);
  if (l < kLogMagMin) return 0;
  if (l >= kLogMagMax) return kHistBins - 1;
  const int bin = static_cast<int>(std::floor((l - kLogMagMin) / kLogBinWidth));
  return std::clamp(bin, 0, kHistBins - 1);
}

inline Histogram256 flow_mag_histogram(const FlowField& flow) {
  Histogram256 h;
  const size_t n = flow.u.size();
  for (size_t i = 0; i < n; ++i)
    h.bins[flow_mag_bin(std::hypot(flow.u[i], flow.v[i]))] += 1.0;
  for (double& b : h.bins) b /= static_cast<double>(n);
  h.normalized = true;
  return h;
}

// Pools the magnitudes of several fields into one histogram.
inline Histogram256 flow_mag_histogram(const std::vector<FlowField>& flows) {
  if (flows.empty()) throw EmptyError("no flow fields to pool");
  Histogram256 h;
  size_t n = 0;
  for (const auto& f : flows) {
    for (size_t i = 0; i < f.u.size(); ++i)
      h.bins[flow_mag_bin(std::hypot(f.u[i], f.v[i]))] += 1.0;
    n += f.u.size();
  }
  for (double& b : h.bins) b /= static_cast<double>(n);
  h.normalized = true;
  return h;
}

// D(p || q) with additive eps smoothing followed by renormalization of both
// sides, natural log. Smoothing keeps zero bins of q from blowing up.
inline double kl_divergence(const Histogram256& p, const Histogram256& q,
                            double eps = 1e-8) {
  if (!p.normalized || !q.normalized)
    throw NormalizationError("kl_divergence requires normalized histograms");
  double ps = 0.0, qs = 0.0;
  for (int i = 0; i < kHistBins; ++i) {
    ps += p.bins[i] + eps;
    qs += q.bins[i] + eps;
  }
  double d = 0.0;
  for (int i = 0; i < kHistBins; ++i) {
    const double pi = (p.bins[i] + eps) / ps;
    const double qi = (q.bins[i] + eps) / qs;
    d += pi * std::log(pi / qi);
  }
  return d;
}

// Static peak (background) plus motion peak, over log2 magnitude.
struct FlowTemplateParams {
  double static_mean_log2 = -5.0;
  double static_sigma = 1.0;
  double static_weight = 0.7;
  double motion_mean_log2 = 1.0;
  double motion_sigma = 1.0;
};

inline void validate_template_params(const FlowTemplateParams& p) {
  if (!(p.static_sigma > 0.0) || !(p.motion_sigma > 0.0))
    throw RangeError("template sigmas must be > 0");
  if (!(p.static_weight > 0.0) || !(p.static_weight < 1.0))
    throw RangeError("static_weight must lie in (0,1)");
  if (!(p.motion_mean_log2 > p.static_mean_log2))
    throw RangeError("motion mean must exceed static mean");
}

inline double gaussian_pdf(double x, double mu, double sigma) {
  const double z = (x - mu) / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * M_PI));
}

// Mixture density evaluated at bin centers, scaled by bin width, renormalized.
inline Histogram256 gaussian_mixture_template(const FlowTemplateParams& p) {
  validate_template_params(p);
  Histogram256 h;
  for (int i = 0; i < kHistBins; ++i) {
    const double c = kLogMagMin + (i + 0.5) * kLogBinWidth;
    const double d = p.static_weight * gaussian_pdf(c, p.static_mean_log2, p.static_sigma) +
                     (1.0 - p.static_weight) * gaussian_pdf(c, p.motion_mean_log2, p.motion_sigma);
    h.bins[i] = d * kLogBinWidth;
  }
  return h.normalize();
}

}  // namespace ksgen
