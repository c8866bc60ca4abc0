#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace hydro {

inline constexpr int kStateDim = 9;

/// The nine dynamic variables of the unit, in canonical order
/// (theta_delta, s, Q, psi_d, psi_q, psi_r, psi_rd, psi_rq, mu_delta).
///
/// theta_delta  deviation of the electrical angle [rad]
/// s            relative speed deviation [p.u.]
/// Q            water flow through the turbine [m^3/s]
/// psi_*        flux linkages [p.u.]
/// mu_delta     guide-vane deviation from the operating position [p.u.]
struct State {
  double theta_delta = 0.0;
  double s = 0.0;
  double Q = 0.0;
  double psi_d = 0.0;
  double psi_q = 0.0;
  double psi_r = 0.0;
  double psi_rd = 0.0;
  double psi_rq = 0.0;
  double mu_delta = 0.0;

  double operator[](int i) const {
    switch (i) {
      case 0: return theta_delta;
      case 1: return s;
      case 2: return Q;
      case 3: return psi_d;
      case 4: return psi_q;
      case 5: return psi_r;
      case 6: return psi_rd;
      case 7: return psi_rq;
      default: return mu_delta;
    }
  }

  double& operator[](int i) {
    switch (i) {
      case 0: return theta_delta;
      case 1: return s;
      case 2: return Q;
      case 3: return psi_d;
      case 4: return psi_q;
      case 5: return psi_r;
      case 6: return psi_rd;
      case 7: return psi_rq;
      default: return mu_delta;
    }
  }

  std::array<double, kStateDim> to_array() const {
    return {theta_delta, s, Q, psi_d, psi_q, psi_r, psi_rd, psi_rq, mu_delta};
  }

  static State from_array(const std::array<double, kStateDim>& a) {
    return {a[0], a[1], a[2], a[3], a[4], a[5], a[6], a[7], a[8]};
  }

  bool finite() const {
    for (int i = 0; i < kStateDim; ++i)
      if (!std::isfinite((*this)[i])) return false;
    return true;
  }
};

inline const char* state_component_name(int i) {
  static const char* names[kStateDim] = {"theta_delta", "s",      "Q",
                                         "psi_d",       "psi_q",  "psi_r",
                                         "psi_rd",      "psi_rq", "mu_delta"};
  return names[i];
}

// Componentwise helpers used by the integrator and the Newton refiner.

inline State axpy(const State& x, double a, const State& d) {
  return {x.theta_delta + a * d.theta_delta,
          x.s + a * d.s,
          x.Q + a * d.Q,
          x.psi_d + a * d.psi_d,
          x.psi_q + a * d.psi_q,
          x.psi_r + a * d.psi_r,
          x.psi_rd + a * d.psi_rd,
          x.psi_rq + a * d.psi_rq,
          x.mu_delta + a * d.mu_delta};
}

inline double max_abs(const State& x) {
  double m = 0.0;
  for (int i = 0; i < kStateDim; ++i) m = std::max(m, std::abs(x[i]));
  return m;
}

inline double norm2(const State& x) {
  double sum = 0.0;
  for (int i = 0; i < kStateDim; ++i) sum += x[i] * x[i];
  return std::sqrt(sum);
}

}  // namespace hydro
