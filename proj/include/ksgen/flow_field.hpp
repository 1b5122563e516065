#pragma once

#include <cstddef>
#include <vector>

namespace ksgen {

// Per-pixel displacement between adjacent frames, pixels per frame step.
struct FlowField {
  int height = 0;
  int width = 0;
  std::vector<double> u;  // horizontal (columns)
  std::vector<double> v;  // vertical (rows)

  double& at_u(int y, int x) { return u[static_cast<size_t>(y) * width + x]; }
  double& at_v(int y, int x) { return v[static_cast<size_t>(y) * width + x]; }
  double at_u(int y, int x) const { return u[static_cast<size_t>(y) * width + x]; }
  double at_v(int y, int x) const { return v[static_cast<size_t>(y) * width + x]; }
};

inline FlowField make_flow(int h, int w) {
  FlowField f;
  f.height = h;
  f.width = w;
  f.u.assign(static_cast<size_t>(h) * w, 0.0);
  f.v.assign(static_cast<size_t>(h) * w, 0.0);
  return f;
}

}  // namespace ksgen
