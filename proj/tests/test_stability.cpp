#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "hydro/equilibria.hpp"
#include "hydro/errors.hpp"
#include "hydro/fd.hpp"
#include "hydro/params.hpp"
#include "hydro/stability.hpp"

using namespace hydro;

namespace {

// Expand prod_i (lambda - roots[i]) by convolution: independent oracle for
// characteristic-polynomial coefficients.
std::array<double, kStateDim + 1> poly_from_roots(const std::array<double, 9>& roots) {
  std::vector<double> c = {1.0};
  for (double r : roots) {
    std::vector<double> next(c.size() + 1, 0.0);
    for (size_t i = 0; i < c.size(); ++i) {
      next[i] += c[i];
      next[i + 1] -= r * c[i];
    }
    c = next;
  }
  std::array<double, kStateDim + 1> out{};
  for (int i = 0; i <= kStateDim; ++i) out[i] = c[i];
  return out;
}

// Multiply a polynomial by (lambda^2 + 1).
std::array<double, kStateDim + 1> times_imag_pair(const std::vector<double>& c) {
  std::array<double, kStateDim + 1> out{};
  for (size_t i = 0; i < c.size(); ++i) {
    out[i] += c[i];
    out[i + 2] += c[i];
  }
  return out;
}

}  // namespace

TEST_CASE("analytic entries: direct reads") {
  const UnitParams p = sayano_defaults();
  const Equilibrium eq = operating_equilibrium(1.0, p);
  const JacobianMatrix j = analytic_jacobian(eq, p);
  CHECK(j(0, 1) == doctest::Approx(p.gen.omega0));
  CHECK(j(8, 8) == doctest::Approx(-1.0 / p.gov.T_c));
  CHECK(j(8, 1) == doctest::Approx(1.0 / p.gov.T_c));  // as published
  // sparsity: entries outside the published pattern are exactly zero
  CHECK(j(0, 0) == 0.0);
  CHECK(j(2, 4) == 0.0);
  CHECK(j(5, 1) == 0.0);
  CHECK(j(7, 3) == 0.0);
}

TEST_CASE("finite differences recover a linear map exactly") {
  Eigen::Matrix<double, kStateDim, kStateDim> A;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < kStateDim; ++i)
    for (int k = 0; k < kStateDim; ++k) A(i, k) = u(rng);
  auto field = [&](const State& x) {
    State out;
    for (int i = 0; i < kStateDim; ++i) {
      double acc = 0.0;
      for (int k = 0; k < kStateDim; ++k) acc += A(i, k) * x[k];
      out[i] = acc;
    }
    return out;
  };
  State x0;
  x0.theta_delta = 0.4;
  x0.Q = 1.3;
  const auto J = fd_jacobian(field, x0);
  CHECK((J - A).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("corrected analytic Jacobian matches finite differences") {
  const UnitParams p = sayano_defaults();
  const Equilibrium eq = operating_equilibrium(1.0, p);
  UnitParams peq = p;
  peq.gamma = eq.gamma;
  peq.mu_0 = eq.mu_0;

  const JacobianMatrix ja =
      analytic_jacobian(eq, p, JacobianForm::corrected, DeadbandMode::zero_deadband);
  const JacobianMatrix jn = numeric_jacobian(eq.state, peq, 1e-6, true);
  CHECK(jacobian_discrepancies(ja, jn, 1e-5).empty());
}

TEST_CASE("published form disagrees with finite differences exactly where expected") {
  const UnitParams p = sayano_defaults();
  const Equilibrium eq = operating_equilibrium(0.9, p);
  UnitParams peq = p;
  peq.gamma = eq.gamma;
  peq.mu_0 = eq.mu_0;

  const JacobianMatrix ja = analytic_jacobian(eq, p, JacobianForm::as_published);
  const JacobianMatrix jn = numeric_jacobian(eq.state, peq, 1e-6, true);
  const auto flags = jacobian_discrepancies(ja, jn, 1e-5);

  REQUIRE(flags.size() == 3);
  auto has = [&](int r, int c) {
    for (const auto& f : flags) {
      if (f.row == r && f.col == c) return true;
    }
    return false;
  };
  CHECK(has(1, 8));  // s row vs mu_delta: opposite sign
  CHECK(has(2, 8));  // Q row vs mu_delta: opposite sign
  CHECK(has(8, 1));  // governor speed coupling: published 1/T_c
}

TEST_CASE("deadband-interior linearization has no governor speed coupling") {
  const UnitParams p = sayano_defaults();
  const Equilibrium eq = operating_equilibrium(1.0, p);
  UnitParams peq = p;
  peq.gamma = eq.gamma;
  peq.mu_0 = eq.mu_0;
  const JacobianMatrix ja =
      analytic_jacobian(eq, p, JacobianForm::corrected, DeadbandMode::actual);
  CHECK(ja(8, 1) == 0.0);
  const JacobianMatrix jn = numeric_jacobian(eq.state, peq, 1e-7, false);
  CHECK(jacobian_discrepancies(ja, jn, 1e-5).empty());
}

TEST_CASE("probes straddling the deadband edge are rejected") {
  const UnitParams p = sayano_defaults();
  const Equilibrium eq = operating_equilibrium(1.0, p);
  UnitParams peq = p;
  peq.gamma = eq.gamma;
  peq.mu_0 = eq.mu_0;
  State x = eq.state;
  x.s = 0.5 * peq.gov.z;  // exactly on the edge
  CHECK_THROWS_AS(numeric_jacobian(x, peq, 1e-6, false), SmoothnessError);
}

TEST_CASE("characteristic polynomial: fixed cases") {
  SUBCASE("zero matrix gives lambda^9") {
    const auto c = characteristic_polynomial(JacobianMatrix::Zero());
    CHECK(c[0] == 1.0);
    for (int i = 1; i <= kStateDim; ++i) CHECK(c[i] == 0.0);
  }
  SUBCASE("-identity gives binomial coefficients") {
    const auto c = characteristic_polynomial(-JacobianMatrix::Identity());
    const double binom[10] = {1, 9, 36, 84, 126, 126, 84, 36, 9, 1};
    for (int i = 0; i <= kStateDim; ++i) {
      CHECK(c[i] == doctest::Approx(binom[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("characteristic polynomial matches the product form under similarity") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> n(0.0, 1.0);
  const std::array<double, 9> roots = {-3.0, -2.5, -1.0, -0.5, -0.1,
                                       0.2,  0.7,  1.5,  2.2};
  Eigen::Matrix<double, 9, 9> D = Eigen::Matrix<double, 9, 9>::Zero();
  for (int i = 0; i < 9; ++i) D(i, i) = roots[i];

  const auto expected = poly_from_roots(roots);
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::Matrix<double, 9, 9> G;
    for (int i = 0; i < 9; ++i)
      for (int k = 0; k < 9; ++k) G(i, k) = n(rng);
    const Eigen::Matrix<double, 9, 9> Q =
        Eigen::HouseholderQR<Eigen::Matrix<double, 9, 9>>(G).householderQ();
    const JacobianMatrix A = Q.transpose() * D * Q;
    const auto c = characteristic_polynomial(A);
    for (int i = 0; i <= kStateDim; ++i) {
      const double scale = std::max(1.0, std::abs(expected[i]));
      CHECK(std::abs(c[i] - expected[i]) < 1e-7 * scale);
    }
  }
}

TEST_CASE("balancing preserves the spectrum") {
  const UnitParams p = sayano_defaults();
  const Equilibrium eq = operating_equilibrium(1.0, p);
  const JacobianMatrix j = analytic_jacobian(eq, p, JacobianForm::corrected);
  const JacobianMatrix b = balance_matrix(j);
  Eigen::EigenSolver<Eigen::MatrixXd> es_raw(j);
  Eigen::EigenSolver<Eigen::MatrixXd> es_bal(b);
  std::vector<double> re_raw, re_bal;
  for (int i = 0; i < 9; ++i) {
    re_raw.push_back(es_raw.eigenvalues()(i).real());
    re_bal.push_back(es_bal.eigenvalues()(i).real());
  }
  std::sort(re_raw.begin(), re_raw.end());
  std::sort(re_bal.begin(), re_bal.end());
  for (int i = 0; i < 9; ++i) {
    CHECK(re_raw[i] == doctest::Approx(re_bal[i]).epsilon(1e-6));
  }
  // The balanced matrix is materially better scaled.
  CHECK(balance_matrix(j).cwiseAbs().maxCoeff() < j.cwiseAbs().maxCoeff());
}

TEST_CASE("routh-hurwitz verdicts") {
  const double tol = 1e-9;
  SUBCASE("all roots in the left half-plane") {
    const auto c = poly_from_roots({-1, -2, -3, -4, -5, -6, -7, -8, -9});
    const auto v = routh_hurwitz(c, tol);
    CHECK(v.stable == Stability::stable);
    CHECK(v.margin > tol);
  }
  SUBCASE("one right-half-plane root") {
    const auto c = poly_from_roots({1, -2, -3, -4, -5, -6, -7, -8, -9});
    CHECK(routh_hurwitz(c, tol).stable == Stability::unstable);
  }
  SUBCASE("imaginary pair padded with stable factors is marginal") {
    // (lambda^2 + 1)(lambda+1)...(lambda+7)
    std::vector<double> q = {1.0};
    for (int r = 1; r <= 7; ++r) {
      std::vector<double> next(q.size() + 1, 0.0);
      for (size_t i = 0; i < q.size(); ++i) {
        next[i] += q[i];
        next[i + 1] += r * q[i];
      }
      q = next;
    }
    const auto c = times_imag_pair(q);
    CHECK(routh_hurwitz(c, tol).stable == Stability::marginal);
  }
  SUBCASE("non-monic input is rejected") {
    std::array<double, 10> c{};
    c[0] = 2.0;
    CHECK_THROWS_AS(routh_hurwitz(c, tol), ParameterError);
  }
}

TEST_CASE("eigen bound: fixed spectra") {
  SUBCASE("diagonal") {
    JacobianMatrix d = JacobianMatrix::Zero();
    const double entries[9] = {-3, -2, -9, -1.5, -4, -6, -0.25, -8, -5};
    for (int i = 0; i < 9; ++i) d(i, i) = entries[i];
    CHECK(eigen_bound(d) == doctest::Approx(-0.25).epsilon(1e-10));
  }
  SUBCASE("companion matrix of an imaginary pair with stable factors") {
    std::vector<double> q = {1.0};
    for (int r = 1; r <= 7; ++r) {
      std::vector<double> next(q.size() + 1, 0.0);
      for (size_t i = 0; i < q.size(); ++i) {
        next[i] += q[i];
        next[i + 1] += r * q[i];
      }
      q = next;
    }
    const auto c = times_imag_pair(q);
    JacobianMatrix comp = JacobianMatrix::Zero();
    for (int i = 1; i < 9; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < 9; ++i) comp(0, i) = -c[i + 1];
    CHECK(std::abs(eigen_bound(comp)) < 1e-8);
  }
}

TEST_CASE("routh and eigen bound agree away from the margin") {
  const UnitParams p = sayano_defaults();
  for (double g = 0.6; g <= 1.1; g += 0.025) {
    Equilibrium eq;
    try {
      eq = operating_equilibrium(g, p);
    } catch (const Error&) {
      continue;
    }
    const JacobianMatrix j =
        analytic_jacobian(eq, p, JacobianForm::corrected, DeadbandMode::zero_deadband);
    const double bound = eigen_bound(j);
    const double jnorm = balance_matrix(j).norm();
    if (std::abs(bound) <= 1e-4 * jnorm) continue;
    const auto verdict = routh_hurwitz(characteristic_polynomial(j),
                                       p.tol.routh_tol_rel);
    if (bound > 0) {
      CHECK(verdict.stable == Stability::unstable);
    } else {
      CHECK(verdict.stable == Stability::stable);
    }
  }
}

TEST_CASE("stability sweep: structure, windows, and parallel determinism") {
  const UnitParams p = sayano_defaults();
  std::vector<double> grid;
  for (double g = 0.75; g <= 1.051; g += 0.025) grid.push_back(g);

  const SweepResult serial = stability_sweep(grid, p, 1);
  REQUIRE(serial.points.size() == grid.size());
  for (const auto& pt : serial.points) {
    REQUIRE(pt.ok == 1);
    CHECK(pt.operating_branch >= 0);
    CHECK(pt.branches.size() <= 4);
    for (const auto& b : pt.branches) {
      CHECK(b.residual < 1e-8);
    }
  }

  SUBCASE("grid refinement moves window endpoints by less than 2*dgamma") {
    std::vector<double> fine;
    for (double g = 0.75; g <= 1.051; g += 0.0125) fine.push_back(g);
    const SweepResult refined = stability_sweep(fine, p, 1);
    if (serial.window_eig.found && refined.window_eig.found) {
      CHECK(std::abs(serial.window_eig.gamma_lo - refined.window_eig.gamma_lo) <
            2.0 * 0.025);
      CHECK(std::abs(serial.window_eig.gamma_hi - refined.window_eig.gamma_hi) <
            2.0 * 0.025);
    } else {
      CHECK(serial.window_eig.found == refined.window_eig.found);
    }
  }

  SUBCASE("parallel sweep is bitwise identical to the serial reference") {
    const SweepResult parallel = stability_sweep(grid, p, 4);
    REQUIRE(parallel.points.size() == serial.points.size());
    for (size_t i = 0; i < serial.points.size(); ++i) {
      const auto& a = serial.points[i];
      const auto& b = parallel.points[i];
      CHECK(a.mu0 == b.mu0);
      REQUIRE(a.branches.size() == b.branches.size());
      for (size_t k = 0; k < a.branches.size(); ++k) {
        CHECK(a.branches[k].theta == b.branches[k].theta);
        CHECK(a.branches[k].eig.margin == b.branches[k].eig.margin);
        CHECK(a.branches[k].rh.margin == b.branches[k].rh.margin);
      }
    }
  }
}
