#include <doctest.h>

#include <cmath>

#include "hydro/governor.hpp"
#include "hydro/params.hpp"

using namespace hydro;

namespace {

GovernorParams gov_with(double z, double sigma, double tc = 0.5) {
  GovernorParams g = sayano_defaults().gov;
  g.z = z;
  g.sigma = sigma;
  g.T_c = tc;
  g.rho_o = -0.1;
  g.rho_c = 0.1;
  g.mu_min = 0.05;
  g.mu_max = 1.0;
  return g;
}

}  // namespace

TEST_CASE("deadband piecewise values") {
  const GovernorParams g = gov_with(0.002, 1.0);
  CHECK(deadband(0.0005, g) == 0.0);
  CHECK(deadband(0.011, g) == doctest::Approx(0.010).epsilon(1e-14));
  CHECK(deadband(-0.011, g) == doctest::Approx(-0.010).epsilon(1e-14));
}

TEST_CASE("deadband is continuous and odd at the band edges") {
  const GovernorParams g = gov_with(0.002, 1.0);
  const double edge = 0.001;
  for (double eps : {1e-9, 1e-8, 1e-7, 1e-6}) {
    // small slack for the rounding of edge + eps itself
    const double bound = g.sigma * eps * (1.0 + 1e-6);
    CHECK(std::abs(deadband(edge + eps, g) - deadband(edge, g)) <= bound);
    CHECK(std::abs(deadband(edge - eps, g) - deadband(edge, g)) <= bound);
  }
  for (double s : {1e-4, 5e-4, 2e-3, 0.3}) {
    CHECK(deadband(-s, g) == doctest::Approx(-deadband(s, g)).epsilon(1e-15));
  }
}

TEST_CASE("rate limit clamps to the velocity band") {
  const GovernorParams g = gov_with(0.002, 1.0);
  CHECK(rate_limit(0.0, g) == 0.0);
  CHECK(rate_limit(0.5, g) == doctest::Approx(0.1));
  CHECK(rate_limit(-0.5, g) == doctest::Approx(-0.1));
  CHECK(rate_limit(0.05, g) == doctest::Approx(0.05));
}

TEST_CASE("vane saturation returns the clamped deviation") {
  const GovernorParams g = gov_with(0.002, 1.0);
  CHECK(vane_saturation(0.0, 0.5, g) == 0.0);
  CHECK(vane_saturation(0.7, 0.5, g) == doctest::Approx(0.5));    // 1.0 - 0.5
  CHECK(vane_saturation(-0.5, 0.5, g) == doctest::Approx(-0.45));  // 0.05 - 0.5
}

TEST_CASE("stop logic passes only outward pushes at a stop") {
  const GovernorParams g = gov_with(0.002, 1.0);
  CHECK(stop_logic(0.55, 0.5, 0.1, g) == doctest::Approx(0.1));  // above mu_max
  CHECK(stop_logic(0.55, 0.5, -0.1, g) == 0.0);                  // inward allowed
  CHECK(stop_logic(0.0, 0.5, 0.1, g) == 0.0);                    // interior
  CHECK(stop_logic(-0.46, 0.5, -0.1, g) == doctest::Approx(-0.1));  // below mu_min
}

TEST_CASE("governor_rate composes the published pipeline") {
  SUBCASE("equilibrium input gives zero") {
    const GovernorParams g = gov_with(0.002, 1.0);
    CHECK(governor_rate(0.0, 0.0, 0.5, g) == 0.0);
  }
  SUBCASE("hand-evaluated composition") {
    GovernorParams g = gov_with(0.002, 1.0, 0.5);
    g.rho_o = -10.0;
    g.rho_c = 10.0;  // wide rate band
    CHECK(governor_rate(0.011, 0.0, 0.5, g) == doctest::Approx(-0.02).epsilon(1e-12));
  }
  SUBCASE("clamp then divide") {
    const GovernorParams g = gov_with(0.002, 1.0, 0.5);
    CHECK(governor_rate(5.0, 0.0, 0.5, g) == doctest::Approx(-0.2).epsilon(1e-12));
  }
}

TEST_CASE("governor_rate vanishes at rest for any interior operating point") {
  const GovernorParams g = gov_with(0.002, 5.0);
  for (double mu0 = 0.06; mu0 < 1.0; mu0 += 0.05) {
    CHECK(governor_rate(0.0, 0.0, mu0, g) == 0.0);
  }
}

TEST_CASE("governor region identifies smooth pieces") {
  const GovernorParams g = gov_with(0.002, 1.0);
  CHECK(governor_region(0.0, 0.0, 0.5, g) == governor_region(0.0005, 0.0, 0.5, g));
  CHECK_FALSE(governor_region(0.0005, 0.0, 0.5, g) ==
              governor_region(0.0015, 0.0, 0.5, g));
  // z = 0 collapses the deadband to a single linear piece.
  const GovernorParams g0 = gov_with(0.0, 1.0);
  CHECK(governor_region(-1e-6, 0.0, 0.5, g0) == governor_region(1e-6, 0.0, 0.5, g0));
}
