#pragma once

// Dense flow: classical block matching for self-contained runs, plus
// ingestion of externally computed flow sidecars.

#include <cmath>
#include <limits>
#include <vector>

#include "ksgen/errors.hpp"
#include "ksgen/flow_field.hpp"
#include "ksgen/image.hpp"
#include "ksgen/tensor.hpp"

namespace ksgen {

// SAD block matching on luma. For each block the displacement d in
// [-radius, radius]^2 minimizing the sum of absolute differences wins;
// ties go to the smallest |d|, then lexicographic (du, dv). Sample
// coordinates outside the second frame are clamped.
inline FlowField block_matching_flow(const Frame& f1, const Frame& f2, int block = 16,
                                     int radius = 8) {
  if (f1.width != f2.width || f1.height != f2.height)
    throw SizeError("frames must share a resolution");
  if (f1.height < block || f1.width < block)
    throw SizeError("frame smaller than block size");

  const int H = f1.height, W = f1.width;
  std::vector<double> l1(static_cast<size_t>(H) * W), l2(l1.size());
  for (int y = 0; y < H; ++y)
    for (int x = 0; x < W; ++x) {
      l1[static_cast<size_t>(y) * W + x] = luma(f1.px(y, x));
      l2[static_cast<size_t>(y) * W + x] = luma(f2.px(y, x));
    }

  FlowField out = make_flow(H, W);
  for (int by = 0; by < H; by += block) {
    const int y1 = std::min(by + block, H);
    for (int bx = 0; bx < W; bx += block) {
      const int x1 = std::min(bx + block, W);
      double best_sad = std::numeric_limits<double>::infinity();
      int best_du = 0, best_dv = 0;
      long best_r2 = std::numeric_limits<long>::max();
      for (int dv = -radius; dv <= radius; ++dv) {
        for (int du = -radius; du <= radius; ++du) {
          double sad = 0.0;
          for (int y = by; y < y1; ++y) {
            const int sy = std::clamp(y + dv, 0, H - 1);
            for (int x = bx; x < x1; ++x) {
              const int sx = std::clamp(x + du, 0, W - 1);
              sad += std::abs(l1[static_cast<size_t>(y) * W + x] -
                              l2[static_cast<size_t>(sy) * W + sx]);
            }
          }
          const long r2 = static_cast<long>(du) * du + static_cast<long>(dv) * dv;
          const bool better =
              sad < best_sad ||
              (sad == best_sad && (r2 < best_r2 ||
                                   (r2 == best_r2 && (du < best_du ||
                                                      (du == best_du && dv < best_dv)))));
          if (better) {
            best_sad = sad;
            best_du = du;
            best_dv = dv;
            best_r2 = r2;
          }
        }
      }
      for (int y = by; y < y1; ++y)
        for (int x = bx; x < x1; ++x) {
          out.at_u(y, x) = best_du;
          out.at_v(y, x) = best_dv;
        }
    }
  }
  return out;
}

inline std::vector<FlowField> flow_for_sequence(const FrameSequence& seq, int block = 16,
                                                int radius = 8) {
  std::vector<FlowField> out;
  for (size_t i = 0; i + 1 < seq.frames.size(); ++i)
    out.push_back(block_matching_flow(seq.frames[i], seq.frames[i + 1], block, radius));
  return out;
}

// Flow sidecars carry (T-1, H, W, 2) tensors, (u, v) in the last dim.
inline std::vector<FlowField> load_flow(const FeatureSidecar& s) {
  if (s.role != SidecarRole::Flow) throw SidecarError("sidecar role must be flow");
  const auto& sh = s.tensor.shape;
  if (sh.size() != 4 || sh[3] != 2)
    throw SidecarError("flow tensor must have shape (T-1, H, W, 2)");
  const size_t T1 = sh[0], H = sh[1], W = sh[2];
  std::vector<FlowField> out;
  out.reserve(T1);
  size_t off = 0;
  for (size_t t = 0; t < T1; ++t) {
    FlowField f = make_flow(static_cast<int>(H), static_cast<int>(W));
    for (size_t i = 0; i < H * W; ++i) {
      f.u[i] = s.tensor.data[off++];
      f.v[i] = s.tensor.data[off++];
    }
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace ksgen
