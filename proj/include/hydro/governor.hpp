#pragma once

#include "hydro/params.hpp"

namespace hydro {

/// Deadband + measuring gain: eta_s = sigma * chi_s(s).
/// Continuous and odd; zero for |s| < z/2.
inline double deadband(double s, const GovernorParams& gov) {
  const double half = 0.5 * gov.z;
  if (s >= half) return gov.sigma * (s - half);
  if (s <= -half) return gov.sigma * (s + half);
  return 0.0;
}

/// Guide-vane rate restriction: clamp to [rho_o, rho_c].
inline double rate_limit(double eta, const GovernorParams& gov) {
  if (eta < gov.rho_o) return gov.rho_o;
  if (eta > gov.rho_c) return gov.rho_c;
  return eta;
}

/// Servomotor stroke saturation: clamps mu_0 + mu_delta to the stops and
/// returns the clamped deviation.
inline double vane_saturation(double mu_delta, double mu_0, const GovernorParams& gov) {
  const double mu = mu_0 + mu_delta;
  if (mu < gov.mu_min) return gov.mu_min - mu_0;
  if (mu > gov.mu_max) return gov.mu_max - mu_0;
  return mu_delta;
}

/// Stop feedback xi_rho: equals the rate command when it pushes the vanes
/// past a limit stop, zero otherwise. The net command rate_cmd - xi_rho
/// then vanishes exactly at an outward push.
inline double stop_logic(double mu_delta, double mu_0, double rate_cmd,
                         const GovernorParams& gov) {
  const double mu = mu_0 + mu_delta;
  if (mu < gov.mu_min && rate_cmd < 0.0) return rate_cmd;
  if (mu > gov.mu_max && rate_cmd > 0.0) return rate_cmd;
  return 0.0;
}

/// Full governor pipeline: deadband -> control signal -> rate limit ->
/// stop feedback -> servomotor. Returns d(mu_delta)/dt.
inline double governor_rate(double s, double mu_delta, double mu_0,
                            const GovernorParams& gov) {
  const double eta_s = deadband(s, gov);
  const double eta = -eta_s - vane_saturation(mu_delta, mu_0, gov);
  const double rho = rate_limit(eta, gov);
  const double xi = rho - stop_logic(mu_delta, mu_0, rho, gov);
  return xi / gov.T_c;
}

/// Identifies which smooth piece of the governor nonlinearities a point
/// lies on. Finite-difference probes must not straddle two pieces.
struct GovernorRegion {
  int deadband_zone = 0;  ///< -1 below, 0 inside, +1 above
  int vane_zone = 0;      ///< -1 at lower stop, 0 interior, +1 at upper stop
  int rate_zone = 0;      ///< -1 at rho_o, 0 unclamped, +1 at rho_c
  bool stop_active = false;

  friend bool operator==(const GovernorRegion&, const GovernorRegion&) = default;
};

inline GovernorRegion governor_region(double s, double mu_delta, double mu_0,
                                      const GovernorParams& gov) {
  GovernorRegion reg;
  const double half = 0.5 * gov.z;
  // With z = 0 the deadband map degenerates to the linear sigma*s: one
  // smooth piece, no boundary to straddle.
  reg.deadband_zone =
      gov.z == 0.0 ? 0 : (s >= half ? 1 : (s <= -half ? -1 : 0));
  const double mu = mu_0 + mu_delta;
  reg.vane_zone = mu < gov.mu_min ? -1 : (mu > gov.mu_max ? 1 : 0);
  const double eta = -deadband(s, gov) - vane_saturation(mu_delta, mu_0, gov);
  reg.rate_zone = eta < gov.rho_o ? -1 : (eta > gov.rho_c ? 1 : 0);
  const double rho = rate_limit(eta, gov);
  reg.stop_active = stop_logic(mu_delta, mu_0, rho, gov) != 0.0;
  return reg;
}

}  // namespace hydro
