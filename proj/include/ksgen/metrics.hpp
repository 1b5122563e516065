#pragma once

// Evaluation suite: cosine-based scores, motion distance, Fréchet distances
// with a PSD matrix square root, and the key-step fusion/loss arithmetic.

#include <cmath>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ksgen/errors.hpp"
#include "ksgen/flow_field.hpp"
#include "ksgen/histogram.hpp"
#include "ksgen/select.hpp"
#include "ksgen/tensor.hpp"

namespace ksgen {

inline double cosine_score_100(std::span<const float> a, std::span<const float> b) {
  return 100.0 * cosine(a, b);
}

inline double cosine_score_100(const std::vector<float>& a, const std::vector<float>& b) {
  return cosine_score_100(std::span<const float>(a), std::span<const float>(b));
}

inline double action_score(std::span<const float> gen_logits,
                           std::span<const float> real_logits) {
  if (gen_logits.size() != kActionLogitDim || real_logits.size() != kActionLogitDim)
    throw ShapeError("action logits must have length 174");
  return cosine_score_100(gen_logits, real_logits);
}

// Mean per-frame cosine score; serves both the CLIP and DINO metrics.
inline double framewise_score(const TensorFile& gen_feats, const TensorFile& real_feats) {
  if (gen_feats.shape.size() != 2 || gen_feats.shape != real_feats.shape)
    throw ShapeError("framewise features must share shape (T, D)");
  const size_t T = gen_feats.shape[0];
  const size_t D = gen_feats.shape[1];
  double acc = 0.0;
  for (size_t t = 0; t < T; ++t)
    acc += cosine_score_100({gen_feats.data.data() + t * D, D},
                            {real_feats.data.data() + t * D, D});
  return acc / static_cast<double>(T);
}

enum class MotionPooling { PoolHistogram, MeanPerFrameKl };

// KL divergence between pooled log-magnitude histograms of the two clips.
inline double motion_distance(const std::vector<FlowField>& gen_flows,
                              const std::vector<FlowField>& real_flows,
                              MotionPooling pooling = MotionPooling::PoolHistogram) {
  if (gen_flows.empty() || real_flows.empty()) throw EmptyError("empty flow list");
  if (pooling == MotionPooling::PoolHistogram)
    return kl_divergence(flow_mag_histogram(gen_flows), flow_mag_histogram(real_flows));
  const size_t n = std::min(gen_flows.size(), real_flows.size());
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i)
    acc += kl_divergence(flow_mag_histogram(gen_flows[i]), flow_mag_histogram(real_flows[i]));
  return acc / static_cast<double>(n);
}

struct GaussianStats {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

// Sample mean plus covariance (divisor N-1 by default), symmetrized.
inline GaussianStats fit_gaussian(const Eigen::MatrixXd& features, bool unbiased = true) {
  const Eigen::Index n = features.rows();
  if (n < 2) throw SampleError("need at least 2 samples");
  GaussianStats g;
  g.mean = features.colwise().mean();
  Eigen::MatrixXd centered = features.rowwise() - g.mean.transpose();
  const double div = unbiased ? static_cast<double>(n - 1) : static_cast<double>(n);
  g.cov = (centered.transpose() * centered) / div;
  g.cov = 0.5 * (g.cov + g.cov.transpose().eval());
  return g;
}

inline GaussianStats fit_gaussian(const TensorFile& features, bool unbiased = true) {
  if (features.shape.size() != 2) throw ShapeError("features must be (N, D)");
  const Eigen::Index n = static_cast<Eigen::Index>(features.shape[0]);
  const Eigen::Index d = static_cast<Eigen::Index>(features.shape[1]);
  Eigen::MatrixXd m(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = features.data[i * d + j];
  return fit_gaussian(m, unbiased);
}

// Symmetric PSD square root via eigendecomposition; small negative
// eigenvalues (>= -1e-8 relative) are clamped to zero.
inline Eigen::MatrixXd matrix_sqrt_psd(const Eigen::MatrixXd& m) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose().eval()).cwiseAbs().maxCoeff() > 1e-6 * scale)
    throw SymmetryError("matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose().eval()));
  Eigen::VectorXd ev = es.eigenvalues();
  const double tol = 1e-8 * std::max(1.0, ev.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -tol) throw NotPSDError("matrix has significantly negative eigenvalues");
    if (ev(i) < 0.0) ev(i) = 0.0;
  }
  return es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

// ||mu1-mu2||^2 + Tr(S1 + S2 - 2 (S1^{1/2} S2 S1^{1/2})^{1/2}); the sandwich
// form keeps the inner product symmetric. Tiny negative residue clamps to 0.
inline double frechet_distance(const GaussianStats& g1, const GaussianStats& g2) {
  if (g1.mean.size() != g2.mean.size()) throw ShapeError("dimension mismatch");
  const Eigen::MatrixXd s1_half = matrix_sqrt_psd(g1.cov);
  Eigen::MatrixXd inner = s1_half * g2.cov * s1_half;
  inner = 0.5 * (inner + inner.transpose().eval());
  const Eigen::MatrixXd cross = matrix_sqrt_psd(inner);
  const double mean_term = (g1.mean - g2.mean).squaredNorm();
  double trace_term = g1.cov.trace() + g2.cov.trace() - 2.0 * cross.trace();
  if (trace_term < 0.0 && trace_term > -1e-6) trace_term = 0.0;
  return mean_term + trace_term;
}

// --- key-step feature fusion / loss arithmetic ---

struct FusionParams {
  double fusion_weight = 0.5;
  double consistency_weight = 0.5;
};

// f_hat = w * f_pred + (1 - w) * f_0
inline std::vector<double> kig_fuse(std::span<const double> f_pred,
                                    std::span<const double> f_0, double w) {
  if (f_pred.size() != f_0.size()) throw ShapeError("dimension mismatch");
  if (w < 0.0 || w > 1.0) throw RangeError("fusion weight must lie in [0,1]");
  std::vector<double> out(f_pred.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = w * f_pred[i] + (1.0 - w) * f_0[i];
  return out;
}

struct KigLosses {
  double loss_gt = 0.0;
  double loss_consistency = 0.0;
  double total = 0.0;
};

// loss_gt = MSE(pred, gt); loss_consistency = MSE(pred, f_0 broadcast);
// total = loss_gt + consistency_weight * loss_consistency. MSE here is the
// squared Euclidean distance per feature row, averaged over rows.
inline KigLosses kig_losses(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& gt,
                            const Eigen::VectorXd& f_0, double consistency_weight) {
  if (pred.rows() != gt.rows() || pred.cols() != gt.cols() || pred.cols() != f_0.size())
    throw ShapeError("shape mismatch");
  KigLosses l;
  l.loss_gt = (pred - gt).squaredNorm() / static_cast<double>(pred.rows());
  l.loss_consistency =
      (pred.rowwise() - f_0.transpose()).squaredNorm() / static_cast<double>(pred.rows());
  l.total = l.loss_gt + consistency_weight * l.loss_consistency;
  return l;
}

}  // namespace ksgen
