#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hydro/params.hpp"
#include "hydro/state.hpp"

namespace hydro {

/// A refined steady state of the unit.
struct Equilibrium {
  State state;
  double mu_0 = 0.0;
  double gamma = 1.0;
  int theta_branch = 0;        ///< index into the sorted root list, 0..3
  double residual_norm = 0.0;  ///< ||rhs|| after refinement
  bool saturated = false;      ///< mu_0 clamped at a vane stop
};

/// Steady-state stator currents at voltage U and angle theta (rotor EMFs
/// at their equilibrium values E_q = E_r, E_rd = E_rq = 0).
struct SteadyCurrents {
  double i_d = 0.0;
  double i_q = 0.0;
};
SteadyCurrents steady_currents(double U, double theta, const GeneratorRatings& gen);

/// Generator torque as a function of voltage and angle along the manifold
/// of electrical steady states; the torque side of the balance equation.
double generator_torque_curve(double U, double theta, const UnitParams& params);

/// Turbine torque at synchronous speed, linear in mu_0:
/// k C (p_u - p_l)^(3/2) mu_0 / omega0^2.
double turbine_torque_linear(double mu_0, const UnitParams& params);

struct Mu0Result {
  double mu_0 = 0.0;
  bool saturated = false;
};

/// Operating vane position from the torque balance at theta0, clamped to
/// the vane stops.
Mu0Result solve_mu0(double gamma, const UnitParams& params);

/// All roots of M_G(gamma*U_nom, theta) = M_T(mu_0) on [0, 2*pi), found by
/// sign-change bracketing on a fine grid plus bisection. The root count is
/// between 0 and 4; an empty list means no steady state exists.
std::vector<double> find_theta_equilibria(double gamma, double mu_0,
                                          const UnitParams& params);

/// Assembles the full nine-dimensional steady state for a balance root
/// theta and refines it. Throws ConvergenceError if the residual cannot
/// reach params.tol.eq_residual.
Equilibrium build_equilibrium(double gamma, double mu_0, double theta,
                              const UnitParams& params, int theta_branch = 0,
                              bool saturated = false);

/// Damped Newton iteration on rhs(x) = 0 over all nine coordinates.
/// Returns the refined equilibrium; throws ConvergenceError (with the final
/// residual attached) when the guess is outside the convergence basin.
/// params.gamma and params.mu_0 select the system.
Equilibrium refine_equilibrium(const State& x_guess, const UnitParams& params);

/// The operating equilibrium at a given voltage ratio: solves for mu_0,
/// locates the balance root nearest theta0 and refines. Throws
/// NumericError when no balance root exists.
Equilibrium operating_equilibrium(double gamma, const UnitParams& params);

/// Per-voltage curves of the balance solution. Flag columns use uint8_t so
/// parallel writers can fill disjoint slots safely.
struct BalanceCurve {
  std::vector<double> gamma_grid;
  std::vector<double> mu0_values;
  std::vector<double> theta_values;   ///< operating-branch theta [rad]
  std::vector<double> power_values;   ///< instantaneous power at the operating point
  std::vector<double> residuals;
  std::vector<std::uint8_t> saturated;
  std::vector<std::uint8_t> ok;       ///< zero rows are gap markers
  std::vector<std::string> messages;  ///< failure description for gap rows
};

/// Evaluates the balance curves over a voltage grid. Per-point failures
/// become gap markers, not a global failure. jobs <= 1 runs the serial
/// reference path.
BalanceCurve balance_curves(const std::vector<double>& gamma_grid,
                            const UnitParams& params, int jobs = 1);

}  // namespace hydro
