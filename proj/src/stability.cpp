#include "hydro/stability.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "hydro/electrical.hpp"
#include "hydro/errors.hpp"
#include "hydro/fd.hpp"
#include "hydro/governor.hpp"
#include "hydro/model.hpp"
#include "hydro/parallel.hpp"

namespace hydro {

JacobianMatrix analytic_jacobian(const Equilibrium& eq, const UnitParams& base,
                                 JacobianForm form, DeadbandMode mode) {
  UnitParams params = base;
  params.gamma = eq.gamma;
  params.mu_0 = eq.mu_0;

  const auto& gen = params.gen;
  const auto& tur = params.tur;
  const auto& der = params.der;
  const InversionCoefficients c = inversion_coefficients(der, gen);
  const State& x = eq.state;

  const double w0 = gen.omega0;
  const double U = params.U();
  const double mu0 = params.mu_0;
  const double Q = x.Q;
  const double theta = gen.theta0 + x.theta_delta;
  const double TJ = der.T_J;
  const double C2mu2 = tur.C * tur.C * mu0 * mu0;
  const double flow = tur.S_area / (tur.l * tur.rho_w);

  JacobianMatrix j = JacobianMatrix::Zero();

  j(0, 1) = w0;

  j(1, 1) = -tur.k * Q * Q * Q / (TJ * C2mu2 * w0 * w0);
  j(1, 2) = 3.0 * tur.k * Q * Q / (TJ * C2mu2 * w0 * w0);
  j(1, 3) = ((c.X_d - c.Y_q) * x.psi_q + c.Y_rq * x.psi_rq) / TJ;
  j(1, 4) = (-c.Y_q * x.psi_d + c.X_d * x.psi_d - c.X_r * x.psi_r +
             c.X_rd * x.psi_rd) /
            TJ;
  j(1, 5) = -c.X_r * x.psi_q / TJ;
  j(1, 6) = c.X_rd * x.psi_q / TJ;
  j(1, 7) = c.Y_rq * x.psi_d / TJ;
  j(1, 8) = 2.0 * tur.k * Q * Q * Q / (TJ * C2mu2 * mu0 * w0 * w0);

  j(2, 2) = -2.0 * flow * Q / C2mu2;
  j(2, 8) = -2.0 * flow * Q * Q / (C2mu2 * mu0);

  j(3, 0) = w0 * U * std::cos(theta);
  j(3, 1) = -w0 * x.psi_q;
  j(3, 3) = -w0 * gen.r * c.X_d;
  j(3, 4) = -w0;
  j(3, 5) = w0 * gen.r * c.X_r;
  j(3, 6) = -w0 * gen.r * c.X_rd;

  j(4, 0) = w0 * U * std::sin(theta);
  j(4, 1) = w0 * x.psi_d;
  j(4, 3) = w0;
  j(4, 4) = -w0 * gen.r * c.Y_q;
  j(4, 7) = w0 * gen.r * c.Y_rq;

  j(5, 3) = -c.Z_d / gen.T_r;
  j(5, 5) = -c.Z_r / gen.T_r;
  j(5, 6) = c.Z_rd / gen.T_r;

  j(6, 3) = c.Q_d / der.T_rd;
  j(6, 5) = -c.Q_r / der.T_rd;
  j(6, 6) = -c.Q_rd / der.T_rd;

  j(7, 4) = c.P_q / der.T_rq;
  j(7, 7) = -c.P_rq / der.T_rq;

  j(8, 1) = 1.0 / params.gov.T_c;
  j(8, 8) = -1.0 / params.gov.T_c;

  if (form == JacobianForm::corrected) {
    // True partial derivatives of the implemented rhs. The published rows
    // carry the opposite sign on both mu_delta couplings, and the governor
    // speed coupling ignores the deadband and the measuring gain.
    j(1, 8) = -j(1, 8);
    j(2, 8) = -j(2, 8);
    j(8, 1) = mode == DeadbandMode::zero_deadband
                  ? -params.gov.sigma / params.gov.T_c
                  : 0.0;
  }
  return j;
}

JacobianMatrix numeric_jacobian(const State& x, const UnitParams& base, double h_rel,
                                bool zero_deadband) {
  UnitParams params = base;
  if (zero_deadband) params.gov.z = 0.0;
  const Model model(params);

  // Reject probe pairs that straddle a piecewise boundary of the governor.
  auto region = [&](const State& y) {
    return governor_region(y.s, y.mu_delta, params.mu_0, params.gov);
  };
  for (int k = 0; k < kStateDim; ++k) {
    const double scale = std::max(1.0, std::abs(x[k]));
    const double h = std::clamp(h_rel * scale, 1e-8, 1e-4 * scale);
    State xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    if (!(region(xp) == region(xm))) {
      std::ostringstream os;
      os << "numeric_jacobian: probe in component " << state_component_name(k)
         << " straddles a governor smoothness boundary";
      throw SmoothnessError(os.str());
    }
  }

  return fd_jacobian([&](const State& y) { return model.rhs(y); }, x, h_rel);
}

std::vector<JacobianDiscrepancy> jacobian_discrepancies(const JacobianMatrix& a,
                                                        const JacobianMatrix& b,
                                                        double rtol) {
  std::vector<JacobianDiscrepancy> out;
  for (int i = 0; i < kStateDim; ++i) {
    double row_scale = 0.0;
    for (int k = 0; k < kStateDim; ++k) {
      row_scale = std::max({row_scale, std::abs(a(i, k)), std::abs(b(i, k))});
    }
    for (int k = 0; k < kStateDim; ++k) {
      const double diff = std::abs(a(i, k) - b(i, k));
      const double denom = std::max(std::abs(a(i, k)), std::abs(b(i, k)));
      if (diff > rtol * denom && diff > rtol * row_scale) {
        out.push_back({i, k, a(i, k), b(i, k), denom > 0 ? diff / denom : 0.0});
      }
    }
  }
  return out;
}

JacobianMatrix balance_matrix(const JacobianMatrix& a) {
  // Parlett-Reinsch balancing with radix-2 scale factors: diagonal
  // similarity D^-1 A D equalizing the 1-norms of matching rows/columns.
  JacobianMatrix m = a;
  const int n = kStateDim;
  bool converged = false;
  int guard = 0;
  while (!converged && guard++ < 100) {
    converged = true;
    for (int i = 0; i < n; ++i) {
      double c = 0.0, r = 0.0;
      for (int k = 0; k < n; ++k) {
        if (k == i) continue;
        c += std::abs(m(k, i));
        r += std::abs(m(i, k));
      }
      if (c == 0.0 || r == 0.0) continue;
      double f = 1.0;
      const double sum = c + r;
      while (c < r / 2.0) {
        f *= 2.0;
        c *= 4.0;
      }
      while (c >= r * 2.0) {
        f /= 2.0;
        c /= 4.0;
      }
      if ((c + r) / f < 0.95 * sum) {
        converged = false;
        for (int k = 0; k < n; ++k) m(i, k) /= f;
        for (int k = 0; k < n; ++k) m(k, i) *= f;
      }
    }
  }
  return m;
}

std::array<double, kStateDim + 1> characteristic_polynomial(const JacobianMatrix& j) {
  const JacobianMatrix bal = balance_matrix(j);

  const double max_entry = bal.cwiseAbs().maxCoeff();
  if (!(max_entry < 1e100)) {
    throw NumericError("characteristic_polynomial: entries exceed scaling bounds");
  }

  // Scale by a power of two so the recurrence runs on a matrix of norm
  // O(1); coefficients are unscaled afterwards.
  double scale = 1.0;
  if (max_entry > 0.0) {
    int exp2 = 0;
    std::frexp(max_entry, &exp2);
    scale = std::ldexp(1.0, exp2);
  }
  const JacobianMatrix A = bal / scale;

  // Faddeev-LeVerrier: M_0 = I, c_k = -tr(A M_{k-1})/k, M_k = A M_{k-1} + c_k I.
  std::array<double, kStateDim + 1> coeffs{};
  coeffs[0] = 1.0;
  JacobianMatrix M = JacobianMatrix::Identity();
  for (int k = 1; k <= kStateDim; ++k) {
    const JacobianMatrix AM = A * M;
    const double ck = -AM.trace() / k;
    coeffs[k] = ck;
    M = AM + ck * JacobianMatrix::Identity();
  }

  double pow_scale = 1.0;
  for (int k = 1; k <= kStateDim; ++k) {
    pow_scale *= scale;
    coeffs[k] *= pow_scale;
  }
  return coeffs;
}

StabilityVerdict routh_hurwitz(const std::array<double, kStateDim + 1>& coeffs,
                               double tol) {
  if (std::abs(coeffs[0] - 1.0) > 1e-12) {
    throw ParameterError("routh_hurwitz: polynomial must be monic");
  }
  constexpr int n = kStateDim;            // degree
  constexpr int cols = (n + 2) / 2;       // = 5
  const double eps_pivot = 1e-290;

  // rows[0] = even-position coefficients, rows[1] = odd-position ones.
  std::array<std::array<double, cols>, n + 1> rows{};
  for (int i = 0; i <= n; ++i) rows[i % 2 == 0 ? 0 : 1][i / 2] += coeffs[i];

  bool zero_row_seen = false;
  std::array<double, n + 1> first_col{};
  first_col[0] = rows[0][0];
  first_col[1] = rows[1][0];

  auto row_max = [&](int r) {
    double m = 0.0;
    for (int c = 0; c < cols; ++c) m = std::max(m, std::abs(rows[r][c]));
    return m;
  };

  // Rows are max-normalized so entries stay relative quantities, except
  // when a row collapses below tol: that is the auxiliary-polynomial
  // signal and must not be rescaled into rounding noise.
  auto normalize = [&](int r) {
    const double m = row_max(r);
    if (m > tol)
      for (int c = 0; c < cols; ++c) rows[r][c] /= m;
    first_col[r] = rows[r][0];
  };
  normalize(0);
  normalize(1);

  for (int r = 2; r <= n; ++r) {
    // All-zero previous row: auxiliary-polynomial case (roots placed
    // symmetrically about the origin). Continue with the derivative of the
    // auxiliary polynomial built from the row above it.
    if (row_max(r - 1) <= tol) {
      zero_row_seen = true;
      const int aux_degree = n - (r - 2);  // degree of the row[r-2] polynomial
      for (int c = 0; c < cols; ++c) {
        const int power = aux_degree - 2 * c;
        rows[r - 1][c] = power > 0 ? rows[r - 2][c] * power : 0.0;
      }
      normalize(r - 1);
    }

    double pivot = rows[r - 1][0];
    if (std::abs(pivot) <= eps_pivot) {
      // Epsilon substitution for an isolated zero pivot.
      pivot = tol > 0 ? tol * 1e-6 : 1e-30;
      rows[r - 1][0] = pivot;
    }
    for (int c = 0; c + 1 < cols; ++c) {
      rows[r][c] = (pivot * rows[r - 2][c + 1] - rows[r - 2][0] * rows[r - 1][c + 1]) /
                   pivot;
    }
    rows[r][cols - 1] = 0.0;
    normalize(r);
  }

  double min_entry = first_col[0];
  for (int r = 1; r <= n; ++r) min_entry = std::min(min_entry, first_col[r]);

  StabilityVerdict v;
  v.method = Method::routh_hurwitz;
  v.margin = min_entry;
  if (min_entry > tol && !zero_row_seen) {
    v.stable = Stability::stable;
  } else if (min_entry < -tol) {
    v.stable = Stability::unstable;
  } else {
    v.stable = Stability::marginal;
  }
  return v;
}

double eigen_bound(const JacobianMatrix& j) {
  const JacobianMatrix bal = balance_matrix(j);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(bal, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw NumericError("eigen_bound: QR iteration did not converge");
  }
  return solver.eigenvalues().real().maxCoeff();
}

namespace {

Stability eigen_verdict(double margin, double band) {
  if (margin < -band) return Stability::stable;
  if (margin > band) return Stability::unstable;
  return Stability::marginal;
}

/// Classifies every branch at one voltage ratio.
SweepPoint classify_point(double gamma, const UnitParams& params, JacobianForm form,
                          DeadbandMode mode) {
  SweepPoint pt;
  pt.gamma = gamma;
  try {
    const Mu0Result m = solve_mu0(gamma, params);
    pt.mu0 = m.mu_0;
    pt.saturated = m.saturated ? 1 : 0;
    const std::vector<double> roots = find_theta_equilibria(gamma, m.mu_0, params);
    if (roots.empty()) {
      pt.message = "no balance root";
      return pt;
    }
    int operating = 0;
    for (int i = 1; i < static_cast<int>(roots.size()); ++i) {
      auto dist = [&](double th) {
        double d = std::fmod(std::abs(th - params.gen.theta0), 2.0 * M_PI);
        return std::min(d, 2.0 * M_PI - d);
      };
      if (dist(roots[i]) < dist(roots[operating])) operating = i;
    }
    for (int i = 0; i < static_cast<int>(roots.size()); ++i) {
      BranchClassification bc;
      bc.branch = i;
      bc.theta = roots[i];
      bc.operating = (i == operating) ? 1 : 0;
      const Equilibrium eq =
          build_equilibrium(gamma, m.mu_0, roots[i], params, i, m.saturated);
      bc.residual = eq.residual_norm;
      const JacobianMatrix J = analytic_jacobian(eq, params, form, mode);
      bc.jac_norm = balance_matrix(J).norm();

      const auto coeffs = characteristic_polynomial(J);
      bc.rh = routh_hurwitz(coeffs, params.tol.routh_tol_rel);
      bc.rh.gamma = gamma;
      bc.rh.branch = i;

      bc.eig.method = Method::eigen_bound;
      bc.eig.margin = eigen_bound(J);
      bc.eig.stable = eigen_verdict(bc.eig.margin, params.tol.marginal_band);
      bc.eig.gamma = gamma;
      bc.eig.branch = i;

      if (bc.operating) pt.operating_branch = static_cast<int>(pt.branches.size());
      pt.branches.push_back(bc);
    }
    pt.ok = 1;
  } catch (const Error& e) {
    pt.ok = 0;
    pt.message = e.what();
  }
  return pt;
}

/// Sign of "unstable" for window bisection: margin of the operating branch.
double operating_margin(double gamma, const UnitParams& params, JacobianForm form,
                        DeadbandMode mode, Method method) {
  const SweepPoint pt = classify_point(gamma, params, form, mode);
  if (!pt.ok || pt.operating_branch < 0) {
    throw NumericError("stability_sweep: no operating branch at gamma=" +
                       std::to_string(gamma));
  }
  const auto& bc = pt.branches[pt.operating_branch];
  return method == Method::eigen_bound ? bc.eig.margin : -bc.rh.margin;
  // RH margin is positive when stable; negate so that > 0 means unstable
  // for both methods.
}

StabilityWindow find_window(const std::vector<SweepPoint>& points,
                            const UnitParams& params, JacobianForm form,
                            DeadbandMode mode, Method method) {
  StabilityWindow w;
  auto unstable_at = [&](const SweepPoint& pt) {
    if (!pt.ok || pt.operating_branch < 0) return false;
    const auto& bc = pt.branches[pt.operating_branch];
    const auto& verdict = method == Method::eigen_bound ? bc.eig : bc.rh;
    return verdict.stable == Stability::unstable;
  };

  int first = -1, last = -1;
  for (int i = 0; i < static_cast<int>(points.size()); ++i) {
    if (unstable_at(points[i])) {
      if (first < 0) first = i;
      last = i;
    }
  }
  if (first < 0) return w;

  w.found = true;
  w.gamma_lo = points[first].gamma;
  w.gamma_hi = points[last].gamma;

  auto bisect = [&](double lo, double hi) {
    // lo and hi bracket a sign change of the instability margin.
    double mlo = operating_margin(lo, params, form, mode, method);
    while (hi - lo > 1e-3) {
      const double mid = 0.5 * (lo + hi);
      double mm;
      try {
        mm = operating_margin(mid, params, form, mode, method);
      } catch (const Error&) {
        break;
      }
      if ((mlo > 0.0) == (mm > 0.0)) {
        lo = mid;
        mlo = mm;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };

  try {
    if (first > 0 && points[first - 1].ok && points[first - 1].operating_branch >= 0) {
      w.gamma_lo = bisect(points[first - 1].gamma, points[first].gamma);
    }
    if (last + 1 < static_cast<int>(points.size()) && points[last + 1].ok &&
        points[last + 1].operating_branch >= 0) {
      w.gamma_hi = bisect(points[last + 1].gamma, points[last].gamma);
    }
  } catch (const Error&) {
    // keep the grid-resolution endpoints
  }
  return w;
}

}  // namespace

SweepResult stability_sweep(const std::vector<double>& gamma_grid,
                            const UnitParams& params, int jobs, JacobianForm form,
                            DeadbandMode mode) {
  for (size_t i = 1; i < gamma_grid.size(); ++i) {
    if (!(gamma_grid[i] > gamma_grid[i - 1])) {
      throw ParameterError("stability_sweep: grid must be ascending");
    }
  }
  SweepResult result;
  result.points.resize(gamma_grid.size());
  parallel_for(static_cast<int>(gamma_grid.size()), jobs, [&](int i) {
    result.points[i] = classify_point(gamma_grid[i], params, form, mode);
  });
  result.window_eig = find_window(result.points, params, form, mode,
                                  Method::eigen_bound);
  result.window_rh = find_window(result.points, params, form, mode,
                                 Method::routh_hurwitz);
  return result;
}

}  // namespace hydro
