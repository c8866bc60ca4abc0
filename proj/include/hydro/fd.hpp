#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>

#include "hydro/state.hpp"

namespace hydro {

/// Central-difference Jacobian of an arbitrary State -> State map.
/// Steps are scaled per component: h_i = clamp(h_rel * max(1, |x_i|),
/// h_min, h_max * max(1, |x_i|)). Error O(h^2); exact for linear maps.
template <class F>
Eigen::Matrix<double, kStateDim, kStateDim> fd_jacobian(F&& f, const State& x,
                                                        double h_rel = 1e-6,
                                                        double h_min = 1e-8,
                                                        double h_max = 1e-4) {
  Eigen::Matrix<double, kStateDim, kStateDim> J;
  for (int k = 0; k < kStateDim; ++k) {
    const double scale = std::max(1.0, std::abs(x[k]));
    const double h = std::clamp(h_rel * scale, h_min, h_max * scale);
    State xp = x;
    State xm = x;
    xp[k] += h;
    xm[k] -= h;
    const State fp = f(xp);
    const State fm = f(xm);
    const double inv2h = 1.0 / (2.0 * h);
    for (int i = 0; i < kStateDim; ++i) J(i, k) = (fp[i] - fm[i]) * inv2h;
  }
  return J;
}

}  // namespace hydro
