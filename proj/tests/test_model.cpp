#include <doctest.h>

#include <cmath>
#include <random>

#include "hydro/equilibria.hpp"
#include "hydro/errors.hpp"
#include "hydro/model.hpp"
#include "hydro/params.hpp"

using namespace hydro;

TEST_CASE("turbine torque basics") {
  const UnitParams p = sayano_defaults();
  CHECK(turbine_torque_pu(0.0, 0.5, 0.0, p) == 0.0);

  // mu^-2 scaling: doubling the opening at fixed flow quarters the torque.
  const double t1 = turbine_torque_pu(100.0, 0.2, 0.0, p);
  const double t2 = turbine_torque_pu(100.0, 0.4, 0.0, p);
  CHECK(t1 == doctest::Approx(4.0 * t2).epsilon(1e-12));

  CHECK_THROWS_AS(turbine_torque_pu(10.0, 0.0, 0.0, p), ParameterError);
  CHECK_THROWS_AS(turbine_torque_pu(10.0, 0.5, -1.0, p), ParameterError);
}

TEST_CASE("turbine torque at the steady flow equals the linear balance form") {
  const UnitParams p = sayano_defaults();
  for (double mu0 : {0.1, 0.2352, 0.5, 0.9}) {
    const double q_st = p.tur.C * mu0 * std::sqrt(p.tur.p_u - p.tur.p_l);
    CHECK(turbine_torque_pu(q_st, mu0, 0.0, p) ==
          doctest::Approx(turbine_torque_linear(mu0, p)).epsilon(1e-12));
  }
}

TEST_CASE("rhs vanishes at a constructed equilibrium") {
  const UnitParams p = sayano_defaults();
  const Equilibrium eq = operating_equilibrium(1.0, p);
  UnitParams peq = p;
  peq.gamma = eq.gamma;
  peq.mu_0 = eq.mu_0;
  CHECK(norm2(rhs(eq.state, peq)) < 1e-8);
}

TEST_CASE("flow derivative opposes an upward flow perturbation") {
  const UnitParams p = sayano_defaults();
  const Equilibrium eq = operating_equilibrium(1.0, p);
  UnitParams peq = p;
  peq.gamma = eq.gamma;
  peq.mu_0 = eq.mu_0;
  State x = eq.state;
  x.Q *= 1.05;
  CHECK(rhs(x, peq).Q < 0.0);
}

TEST_CASE("governor component is zero at rest") {
  const UnitParams p = sayano_defaults();
  const Equilibrium eq = operating_equilibrium(1.0, p);
  UnitParams peq = p;
  peq.gamma = eq.gamma;
  peq.mu_0 = eq.mu_0;
  State x = eq.state;
  x.psi_d += 100.0;  // disturb the electrical side only
  CHECK(rhs(x, peq).mu_delta == 0.0);
}

TEST_CASE("rhs is 2*pi periodic in the angle") {
  UnitParams p = sayano_defaults();
  p.mu_0 = 0.3;
  const Model m(p);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    State x;
    x.theta_delta = 3.0 * u(rng);
    x.s = 0.2 * u(rng);
    x.Q = 80.0 + 40.0 * u(rng);
    x.psi_d = 5e3 * u(rng);
    x.psi_q = 5e3 * u(rng);
    x.psi_r = 5e3 * u(rng);
    x.psi_rd = 5e3 * u(rng);
    x.psi_rq = 5e3 * u(rng);
    x.mu_delta = 0.1 * u(rng);
    State y = x;
    y.theta_delta += 2.0 * M_PI;
    const State fx = m.rhs(x);
    const State fy = m.rhs(y);
    for (int k = 0; k < kStateDim; ++k) {
      CHECK(fx[k] == doctest::Approx(fy[k]).epsilon(1e-9));
    }
  }
}

TEST_CASE("doubling the inertia halves the acceleration component") {
  UnitParams p = sayano_defaults();
  p.mu_0 = 0.25;
  State x;
  x.theta_delta = 0.1;
  x.s = 0.05;
  x.Q = 90.0;
  x.psi_d = 1.2e4;
  x.psi_q = 6e3;
  x.psi_r = 1.1e4;
  x.psi_rd = 1.0e4;
  x.psi_rq = 4e3;
  x.mu_delta = 0.02;
  const double f1 = rhs(x, p).s;
  UnitParams p2 = p;
  p2.gen.J *= 2.0;
  p2.der = derive_params(p2.gen);
  const double f2 = rhs(x, p2).s;
  CHECK(f2 == doctest::Approx(0.5 * f1).epsilon(1e-12));
}

TEST_CASE("torque balance at the operating point") {
  const UnitParams p = sayano_defaults();
  const Equilibrium eq = operating_equilibrium(1.0, p);
  UnitParams peq = p;
  peq.gamma = eq.gamma;
  peq.mu_0 = eq.mu_0;
  const Model m(peq);
  const ElectricalSolution e = m.electrical(eq.state);
  const double mt = turbine_torque_pu(eq.state.Q, eq.mu_0 + eq.state.mu_delta,
                                      eq.state.s, peq);
  CHECK(e.M_G_pu == doctest::Approx(mt).epsilon(1e-8));
}

TEST_CASE("rhs rejects a vanishing gate opening") {
  UnitParams p = sayano_defaults();
  p.mu_0 = 0.1;
  State x;
  x.Q = 50.0;
  x.mu_delta = -0.1;
  CHECK_THROWS_AS(rhs(x, p), ParameterError);
}
