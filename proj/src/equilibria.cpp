#include "hydro/equilibria.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "hydro/errors.hpp"
#include "hydro/fd.hpp"
#include "hydro/model.hpp"
#include "hydro/parallel.hpp"

namespace hydro {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

double wrap_to_pi(double a) {
  a = std::fmod(a + M_PI, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  return a - M_PI;
}

/// Circular distance between two angles.
double ring_distance(double a, double b) { return std::abs(wrap_to_pi(a - b)); }

}  // namespace

SteadyCurrents steady_currents(double U, double theta, const GeneratorRatings& gen) {
  // Solve the stator steady-state relations
  //   x_d i_d + E_r = r i_q + U cos(theta)
  //   x_q i_q       = -r i_d + U sin(theta)
  // for the currents.
  const double D = gen.r * gen.r + gen.x_d * gen.x_q;
  const double us = U * std::sin(theta);
  const double uc = U * std::cos(theta);
  SteadyCurrents c;
  c.i_d = (gen.r * us + gen.x_q * (uc - gen.E_r)) / D;
  c.i_q = (gen.x_d * us - gen.r * uc + gen.r * gen.E_r) / D;
  return c;
}

double generator_torque_curve(double U, double theta, const UnitParams& params) {
  const auto& gen = params.gen;
  const SteadyCurrents c = steady_currents(U, theta, gen);
  // M_G = psi_d i_q - psi_q i_d with psi_d = x_d i_d + E_r, psi_q = x_q i_q.
  return (gen.x_d - gen.x_q) * c.i_d * c.i_q + gen.E_r * c.i_q;
}

double turbine_torque_linear(double mu_0, const UnitParams& params) {
  const auto& tur = params.tur;
  const double w0 = params.gen.omega0;
  return tur.k * tur.C * std::pow(tur.p_u - tur.p_l, 1.5) * mu_0 / (w0 * w0);
}

Mu0Result solve_mu0(double gamma, const UnitParams& params) {
  const double slope = turbine_torque_linear(1.0, params);
  const double mg = generator_torque_curve(gamma * params.gen.U_nom,
                                           params.gen.theta0, params);
  Mu0Result r;
  r.mu_0 = mg / slope;
  if (r.mu_0 < params.gov.mu_min) {
    r.mu_0 = params.gov.mu_min;
    r.saturated = true;
  } else if (r.mu_0 > params.gov.mu_max) {
    r.mu_0 = params.gov.mu_max;
    r.saturated = true;
  }
  return r;
}

std::vector<double> find_theta_equilibria(double gamma, double mu_0,
                                          const UnitParams& params) {
  const double U = gamma * params.gen.U_nom;
  const double mt = turbine_torque_linear(mu_0, params);
  auto g = [&](double theta) {
    return generator_torque_curve(U, theta, params) - mt;
  };

  const int n = std::max(params.tol.theta_grid, 64);
  const double h = kTwoPi / n;

  std::vector<double> roots;
  double ga = g(0.0);
  for (int i = 0; i < n; ++i) {
    const double a = i * h;
    const double b = (i + 1) * h;
    const double gb = g(b);
    if (ga == 0.0) {
      roots.push_back(a);
    } else if (ga * gb < 0.0) {
      // Bisection to 1e-12 in theta.
      double lo = a, hi = b, glo = ga;
      while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if (gm == 0.0) {
          lo = hi = mid;
          break;
        }
        if (glo * gm < 0.0) {
          hi = mid;
        } else {
          lo = mid;
          glo = gm;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    ga = gb;
  }

  // Normalize into [0, 2*pi) and drop duplicates from touching brackets.
  for (double& r : roots) {
    r = std::fmod(r, kTwoPi);
    if (r < 0.0) r += kTwoPi;
  }
  std::sort(roots.begin(), roots.end());
  std::vector<double> unique;
  for (double r : roots) {
    if (unique.empty() || (r - unique.back() > 1e-9 &&
                           ring_distance(r, unique.front()) > 1e-9)) {
      unique.push_back(r);
    }
  }
  return unique;
}

Equilibrium build_equilibrium(double gamma, double mu_0, double theta,
                              const UnitParams& params, int theta_branch,
                              bool saturated) {
  UnitParams p = params;
  p.gamma = gamma;
  p.mu_0 = mu_0;

  const auto& gen = p.gen;
  const double U = p.U();
  const SteadyCurrents c = steady_currents(U, theta, gen);
  const double a3 = p.der.x_ad * p.der.x_ad / p.der.x_r;
  const double a5 = p.der.x_ad * p.der.x_ad / p.der.x_rd;
  const double a6 = p.der.x_ad / p.der.x_rd;
  const double a7 = p.der.x_aq * p.der.x_aq / p.der.x_rq;

  State x;
  x.theta_delta = wrap_to_pi(theta - gen.theta0);
  x.s = 0.0;
  x.Q = p.tur.C * mu_0 * std::sqrt(p.tur.p_u - p.tur.p_l);
  x.psi_d = gen.x_d * c.i_d + gen.E_r;
  x.psi_q = gen.x_q * c.i_q;
  x.psi_r = a3 * c.i_d + gen.E_r;
  x.psi_rd = a5 * c.i_d + a6 * gen.E_r;
  x.psi_rq = a7 * c.i_q;
  x.mu_delta = 0.0;

  Equilibrium eq = refine_equilibrium(x, p);
  eq.theta_branch = theta_branch;
  eq.saturated = saturated;
  return eq;
}

Equilibrium refine_equilibrium(const State& x_guess, const UnitParams& params) {
  const Model model(params);
  auto f = [&](const State& x) { return model.rhs(x); };

  State x = x_guess;
  State res = f(x);
  double rnorm = norm2(res);
  const double target = params.tol.eq_residual;
  // Polish past the acceptance threshold while progress is cheap, so
  // returned residuals carry headroom rather than sitting at the limit.
  const double polish = 0.01 * target;

  int iter = 0;
  while (rnorm >= polish && iter < params.tol.newton_max_iter) {
    const Eigen::Matrix<double, kStateDim, kStateDim> J = fd_jacobian(f, x);
    Eigen::Matrix<double, kStateDim, 1> b;
    for (int i = 0; i < kStateDim; ++i) b(i) = -res[i];
    const Eigen::Matrix<double, kStateDim, 1> delta = J.fullPivLu().solve(b);
    if (!delta.allFinite()) {
      throw ConvergenceError("refine_equilibrium: singular Jacobian", rnorm);
    }

    State step;
    for (int i = 0; i < kStateDim; ++i) step[i] = delta(i);

    // Damped step: halve until the residual decreases.
    double alpha = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 12; ++halving) {
      const State trial = axpy(x, alpha, step);
      State trial_res;
      double trial_norm;
      try {
        trial_res = f(trial);
        trial_norm = norm2(trial_res);
      } catch (const Error&) {
        alpha *= 0.5;  // stepped outside the admissible region
        continue;
      }
      if (trial_norm < rnorm) {
        x = trial;
        res = trial_res;
        rnorm = trial_norm;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      if (rnorm < target) break;  // already good enough, just can't polish further
      throw ConvergenceError("refine_equilibrium: no descent direction; residual " +
                                 std::to_string(rnorm),
                             rnorm);
    }
    ++iter;
  }

  if (rnorm >= target) {
    std::ostringstream os;
    os << "refine_equilibrium: residual " << rnorm << " after " << iter
       << " iterations (target " << target << ")";
    throw ConvergenceError(os.str(), rnorm);
  }

  Equilibrium eq;
  eq.state = x;
  eq.mu_0 = params.mu_0;
  eq.gamma = params.gamma;
  eq.residual_norm = rnorm;
  return eq;
}

Equilibrium operating_equilibrium(double gamma, const UnitParams& params) {
  const Mu0Result m = solve_mu0(gamma, params);
  const std::vector<double> roots = find_theta_equilibria(gamma, m.mu_0, params);
  if (roots.empty()) {
    std::ostringstream os;
    os << "operating_equilibrium: no balance root at gamma=" << gamma;
    throw NumericError(os.str());
  }
  int best = 0;
  for (int i = 1; i < static_cast<int>(roots.size()); ++i) {
    if (ring_distance(roots[i], params.gen.theta0) <
        ring_distance(roots[best], params.gen.theta0)) {
      best = i;
    }
  }
  return build_equilibrium(gamma, m.mu_0, roots[best], params, best, m.saturated);
}

BalanceCurve balance_curves(const std::vector<double>& gamma_grid,
                            const UnitParams& params, int jobs) {
  if (gamma_grid.empty()) throw ParameterError("balance_curves: empty grid");
  for (size_t i = 1; i < gamma_grid.size(); ++i) {
    if (!(gamma_grid[i] > gamma_grid[i - 1])) {
      throw ParameterError("balance_curves: grid must be ascending");
    }
  }

  const int n = static_cast<int>(gamma_grid.size());
  BalanceCurve out;
  out.gamma_grid = gamma_grid;
  out.mu0_values.assign(n, std::numeric_limits<double>::quiet_NaN());
  out.theta_values.assign(n, std::numeric_limits<double>::quiet_NaN());
  out.power_values.assign(n, std::numeric_limits<double>::quiet_NaN());
  out.residuals.assign(n, std::numeric_limits<double>::quiet_NaN());
  out.saturated.assign(n, 0);
  out.ok.assign(n, 0);
  out.messages.assign(n, "");

  parallel_for(n, jobs, [&](int i) {
    try {
      const double gamma = gamma_grid[i];
      const Equilibrium eq = operating_equilibrium(gamma, params);
      const double theta = params.gen.theta0 + eq.state.theta_delta;
      const SteadyCurrents c = steady_currents(gamma * params.gen.U_nom, theta,
                                               params.gen);
      out.mu0_values[i] = eq.mu_0;
      out.theta_values[i] = theta;
      out.power_values[i] =
          instantaneous_power(c.i_d, c.i_q, gamma * params.gen.U_nom, theta);
      out.residuals[i] = eq.residual_norm;
      out.saturated[i] = eq.saturated ? 1 : 0;
      out.ok[i] = 1;
    } catch (const Error& e) {
      out.messages[i] = e.what();
    }
  });
  return out;
}

}  // namespace hydro
