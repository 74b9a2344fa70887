#pragma once

#include <algorithm>
#include <array>
#include <functional>

#include "minkperi/vec.hpp"

namespace minkperi::detail {

struct PlanarMinimum {
  Vec3 x{};
  double value = 0.0;
};

// Nelder-Mead on a function of (x, y). Deterministic: fixed initial simplex
// and standard coefficients.
inline PlanarMinimum nelder_mead_2d(const std::function<double(Vec3)>& f, Vec3 start,
                                    double initial_step, double x_tolerance,
                                    int max_evaluations = 2000) {
  std::array<Vec3, 3> pts{start, start + Vec3{initial_step, 0, 0}, start + Vec3{0, initial_step, 0}};
  std::array<double, 3> vals{f(pts[0]), f(pts[1]), f(pts[2])};
  int evals = 3;
  auto order = [&] {
    std::array<int, 3> idx{0, 1, 2};
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return vals[a] < vals[b]; });
    std::array<Vec3, 3> p2{pts[idx[0]], pts[idx[1]], pts[idx[2]]};
    std::array<double, 3> v2{vals[idx[0]], vals[idx[1]], vals[idx[2]]};
    pts = p2;
    vals = v2;
  };
  order();
  while (evals < max_evaluations) {
    const double size = std::max(norm(pts[1] - pts[0]), norm(pts[2] - pts[0]));
    if (size < x_tolerance) break;
    const Vec3 c = 0.5 * (pts[0] + pts[1]);
    const Vec3 xr = c + (c - pts[2]);
    const double fr = f(xr);
    ++evals;
    if (fr < vals[0]) {
      const Vec3 xe = c + 2.0 * (c - pts[2]);
      const double fe = f(xe);
      ++evals;
      if (fe < fr) {
        pts[2] = xe;
        vals[2] = fe;
      } else {
        pts[2] = xr;
        vals[2] = fr;
      }
    } else if (fr < vals[1]) {
      pts[2] = xr;
      vals[2] = fr;
    } else {
      const bool outside = fr < vals[2];
      const Vec3 xc = outside ? c + 0.5 * (xr - c) : c + 0.5 * (pts[2] - c);
      const double fc = f(xc);
      ++evals;
      if (fc < (outside ? fr : vals[2])) {
        pts[2] = xc;
        vals[2] = fc;
      } else {
        for (int i = 1; i < 3; ++i) {
          pts[i] = pts[0] + 0.5 * (pts[i] - pts[0]);
          vals[i] = f(pts[i]);
          ++evals;
        }
      }
    }
    order();
  }
  return {pts[0], vals[0]};
}

}  // namespace minkperi::detail
