#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "hydro/equilibria.hpp"
#include "hydro/params.hpp"
#include "hydro/state.hpp"

namespace hydro {

/// Dense 9x9 Jacobian, row/column order (theta_delta, s, Q, psi_d, psi_q,
/// psi_r, psi_rd, psi_rq, mu_delta).
using JacobianMatrix = Eigen::Matrix<double, kStateDim, kStateDim>;

/// Which set of analytic entries to evaluate.
///  - as_published: the entry list exactly as transcribed, including the
///    three entries whose signs/couplings disagree with the
///    finite-difference truth (rows 2 and 3 vs mu_delta, row 9 vs s).
///  - corrected: true partial derivatives of the implemented rhs.
enum class JacobianForm { as_published, corrected };

/// Governor linearization used for row 9 of the corrected form.
///  - actual: deadband present; at an equilibrium the speed coupling is 0.
///  - zero_deadband: z = 0, so the speed coupling is -sigma/T_c.
enum class DeadbandMode { actual, zero_deadband };

/// Analytic Jacobian at a refined equilibrium.
JacobianMatrix analytic_jacobian(const Equilibrium& eq, const UnitParams& params,
                                 JacobianForm form = JacobianForm::as_published,
                                 DeadbandMode mode = DeadbandMode::actual);

/// Central-difference Jacobian of the full piecewise rhs. Throws
/// SmoothnessError if any probe pair straddles a governor nonsmoothness
/// boundary. zero_deadband evaluates with z = 0 (the deadband map becomes
/// linear, making the comparison against row 9 well-posed).
JacobianMatrix numeric_jacobian(const State& x, const UnitParams& params,
                                double h_rel = 1e-6, bool zero_deadband = false);

/// One entry of a pairwise Jacobian comparison that exceeded tolerance.
struct JacobianDiscrepancy {
  int row = 0, col = 0;
  double lhs = 0, rhs = 0, rel_err = 0;
};

/// Entries where the two matrices disagree: |a-b| > rtol*max(|a|,|b|) and
/// above a per-row absolute floor rtol*rowscale (structural zeros are not
/// reported as discrepancies).
std::vector<JacobianDiscrepancy> jacobian_discrepancies(const JacobianMatrix& a,
                                                        const JacobianMatrix& b,
                                                        double rtol);

/// Diagonal similarity scaling (powers of two) equalizing row/column
/// norms; returns the balanced matrix. Eigenvalues are unchanged.
JacobianMatrix balance_matrix(const JacobianMatrix& a);

/// Monic characteristic polynomial det(lambda*I - J), coefficients in
/// descending powers (c[0] = 1, ..., c[9] = +-det). Computed by the
/// Faddeev-LeVerrier recurrence after balancing and power-of-two scaling.
/// Throws NumericError if entries exceed the scaling bounds.
std::array<double, kStateDim + 1> characteristic_polynomial(const JacobianMatrix& j);

enum class Method { routh_hurwitz, eigen_bound, transient };
enum class Stability { stable, unstable, marginal };

struct StabilityVerdict {
  Method method = Method::routh_hurwitz;
  Stability stable = Stability::marginal;
  double margin = 0.0;  ///< max eigenvalue real part, or min Routh-column entry
  double gamma = 0.0;
  int branch = 0;
};

/// Routh-Hurwitz classification of a monic degree-9 polynomial. Rows of
/// the Routh array are max-normalized, so first-column entries and the
/// tolerance are relative quantities; tol defaults to
/// params.tol.routh_tol_rel. Zero first-column pivots use the epsilon
/// substitution; an all-zero row (imaginary-axis pair) is continued with
/// the derivative of the auxiliary polynomial and forces a marginal
/// verdict unless a sign change makes it unstable.
StabilityVerdict routh_hurwitz(const std::array<double, kStateDim + 1>& coeffs,
                               double tol);

/// Maximum real part of the spectrum, computed by the dense QR iteration
/// after balancing. Throws NumericError on non-convergence.
double eigen_bound(const JacobianMatrix& j);

/// Classification of one equilibrium branch by both methods.
struct BranchClassification {
  int branch = 0;
  double theta = 0.0;
  double residual = 0.0;
  StabilityVerdict rh;
  StabilityVerdict eig;
  double jac_norm = 0.0;  ///< Frobenius norm of the balanced Jacobian
  std::uint8_t operating = 0;
};

struct SweepPoint {
  double gamma = 0.0;
  double mu0 = 0.0;
  std::uint8_t saturated = 0;
  std::uint8_t ok = 0;
  std::string message;
  std::vector<BranchClassification> branches;
  int operating_branch = -1;  ///< index into branches, -1 if none
};

struct StabilityWindow {
  bool found = false;
  double gamma_lo = 0.0;
  double gamma_hi = 0.0;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  StabilityWindow window_rh;
  StabilityWindow window_eig;
};

/// Classifies every equilibrium branch over a voltage grid and locates the
/// operating branch's instability window (endpoints bisected to
/// delta_gamma <= 1e-3 within the bracketing grid cells). Per-point
/// failures are recorded and the sweep continues. jobs <= 1 runs the
/// serial reference path.
///
/// The default linearization is the governor-active (zero-deadband) one:
/// inside the deadband row 9 decouples from the speed and every operating
/// point is locally stable, so the instability window lives in the active
/// regime that any super-deadband oscillation experiences.
SweepResult stability_sweep(const std::vector<double>& gamma_grid,
                            const UnitParams& params, int jobs = 1,
                            JacobianForm form = JacobianForm::corrected,
                            DeadbandMode mode = DeadbandMode::zero_deadband);

}  // namespace hydro
