#include "hydro/params.hpp"

#include <cmath>
#include <sstream>

#include "hydro/errors.hpp"

namespace hydro {

namespace {

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ParameterError(key + ": " + what);
}

}  // namespace

DerivedElectricalParams derive_params(const GeneratorRatings& gen) {
  validate(gen);
  DerivedElectricalParams d;
  d.x_ad = gen.x_d - gen.x_s;
  d.x_aq = gen.x_q - gen.x_s;

  const double dxd = gen.x_d - gen.x_d_prime;
  require(std::abs(dxd) > 1e-12, "gen.x_d_prime", "x_d - x_d' must be nonzero");
  d.x_r = d.x_ad * d.x_ad / dxd;
  d.x_sr = d.x_r - d.x_ad;
  require(d.x_sr > 0.0, "gen.x_d_prime", "x_sr = x_r - x_ad must be positive");

  // Two-term damper reactances: leakage in series with the parallel
  // combination of the magnetizing branches.
  const double inv_d = 1.0 / (gen.x_d_dprime - gen.x_s) - 1.0 / d.x_ad - 1.0 / d.x_sr;
  require(std::abs(inv_d) > 1e-12, "gen.x_d_dprime", "d-axis reciprocal bracket vanishes");
  d.x_rd = d.x_ad + 1.0 / inv_d;

  const double inv_q = 1.0 / (gen.x_q_dprime - gen.x_s) - 1.0 / d.x_aq;
  require(std::abs(inv_q) > 1e-12, "gen.x_q_dprime", "q-axis reciprocal bracket vanishes");
  d.x_rq = d.x_aq + 1.0 / inv_q;

  require(d.x_rd > 0.0, "gen.x_d_dprime", "derived x_rd must be positive");
  require(d.x_rq > 0.0, "gen.x_q_dprime", "derived x_rq must be positive");

  d.r_rd = gen.r_rd;
  d.r_rq = gen.r_rq;
  d.T_rd = d.x_rd / (gen.omega0 * d.r_rd);
  d.T_rq = d.x_rq / (gen.omega0 * d.r_rq);
  d.T_J = gen.J * gen.omega0 * gen.omega0 / gen.S_b;
  return d;
}

DamperResistances damper_resistances_from_formulas(const GeneratorRatings& gen,
                                                   std::string* note) {
  const double x_ad = gen.x_d - gen.x_s;
  const double x_aq = gen.x_q - gen.x_s;
  const double x_r = x_ad * x_ad / (gen.x_d - gen.x_d_prime);
  const double x_sr = x_r - x_ad;
  const double x_rd =
      x_ad + 1.0 / (1.0 / (gen.x_d_dprime - gen.x_s) - 1.0 / x_ad - 1.0 / x_sr);
  const double x_rq = x_aq + 1.0 / (1.0 / (gen.x_q_dprime - gen.x_s) - 1.0 / x_aq);

  DamperResistances out;
  out.r_rd = (x_rd * gen.x_d - x_ad * x_ad) * x_rd /
             (gen.omega0 * gen.x_d * gen.x_d_prime * gen.T_d_dprime);
  // The printed q-axis formula divides by T''_q, which the tables do not
  // list; T''_d is the only sub-transient time constant available.
  out.r_rq = (x_rq * gen.x_q - x_aq * x_aq) / (gen.omega0 * gen.x_q * gen.T_d_dprime);

  if (note) {
    std::ostringstream os;
    os << "damper-resistance formulas give r_rd=" << out.r_rd << ", r_rq=" << out.r_rq
       << "; configured values are r_rd=" << gen.r_rd << ", r_rq=" << gen.r_rq
       << " (tabulated values take precedence)";
    *note = os.str();
  }
  return out;
}

void validate(const GeneratorRatings& gen) {
  require(gen.omega0 > 0.0, "gen.omega0", "must be positive");
  require(gen.r >= 0.0, "gen.r", "must be nonnegative");
  require(gen.x_s > 0.0, "gen.x_s", "must be positive");
  require(gen.x_d > 0.0, "gen.x_d", "must be positive");
  require(gen.x_q > 0.0, "gen.x_q", "must be positive");
  require(gen.x_d_prime > 0.0, "gen.x_d_prime", "must be positive");
  require(gen.x_d_dprime > 0.0, "gen.x_d_dprime", "must be positive");
  require(gen.x_q_dprime > 0.0, "gen.x_q_dprime", "must be positive");
  require(gen.x_d > gen.x_d_prime, "gen.x_d_prime", "requires x_d > x_d'");
  require(gen.x_d > gen.x_s, "gen.x_d", "requires x_d > x_s");
  require(gen.x_q > gen.x_s, "gen.x_q", "requires x_q > x_s");
  require(gen.x_d_dprime > gen.x_s, "gen.x_d_dprime", "requires x_d'' > x_s");
  require(gen.x_q_dprime > gen.x_s, "gen.x_q_dprime", "requires x_q'' > x_s");
  require(gen.T_r > 0.0, "gen.T_r", "must be positive");
  require(gen.T_d_dprime > 0.0, "gen.T_d_dprime", "must be positive");
  require(gen.J > 0.0, "gen.J", "must be positive");
  require(gen.U_nom > 0.0, "gen.U_nom", "must be positive");
  require(gen.theta0 >= 0.0 && gen.theta0 <= 2.0 * std::asin(1.0), "gen.theta0",
          "must lie in [0, pi/2]");
  require(gen.S_b > 0.0, "gen.S_b", "must be positive");
  require(gen.r_rd > 0.0, "gen.r_rd", "must be positive");
  require(gen.r_rq > 0.0, "gen.r_rq", "must be positive");
}

void validate(const TurbineParams& tur) {
  require(tur.S_area > 0.0, "tur.S_area", "must be positive");
  require(tur.l > 0.0, "tur.l", "must be positive");
  require(tur.rho_w > 0.0, "tur.rho_w", "must be positive");
  require(tur.p_u > tur.p_l, "tur.p_u", "requires p_u > p_l");
  require(tur.p_l > 0.0, "tur.p_l", "must be positive");
  require(tur.C > 0.0, "tur.C", "must be positive");
  require(tur.k > 0.0, "tur.k", "must be positive");
  require(tur.Q_max > 0.0, "tur.Q_max", "must be positive");
}

void validate(const GovernorParams& gov) {
  require(gov.z >= 0.0, "gov.z", "must be nonnegative");
  require(gov.sigma > 0.0, "gov.sigma", "must be positive");
  require(gov.T_c > 0.0, "gov.T_c", "must be positive");
  require(gov.rho_o < 0.0, "gov.rho_o", "must be negative");
  require(gov.rho_c > 0.0, "gov.rho_c", "must be positive");
  require(gov.mu_min >= 0.0, "gov.mu_min", "must be nonnegative");
  require(gov.mu_min < gov.mu_max, "gov.mu_max", "requires mu_min < mu_max");
}

void validate(const DerivedElectricalParams& der, const GeneratorRatings& gen) {
  require(der.x_ad > 0.0, "der.x_ad", "must be positive");
  require(der.x_aq > 0.0, "der.x_aq", "must be positive");
  require(der.x_r > 0.0, "der.x_r", "must be positive");
  require(der.x_rd > 0.0, "der.x_rd", "must be positive");
  require(der.x_rq > 0.0, "der.x_rq", "must be positive");
  require(der.x_sr > 0.0, "der.x_sr", "must be positive");
  require(der.r_rd > 0.0, "der.r_rd", "must be positive");
  require(der.r_rq > 0.0, "der.r_rq", "must be positive");
  require(der.T_J > 0.0, "der.T_J", "must be positive");
  const double t_rd = der.x_rd / (gen.omega0 * der.r_rd);
  const double t_rq = der.x_rq / (gen.omega0 * der.r_rq);
  require(std::abs(der.T_rd - t_rd) <= 1e-9 * std::abs(t_rd), "der.T_rd",
          "inconsistent with x_rd/(omega0*r_rd)");
  require(std::abs(der.T_rq - t_rq) <= 1e-9 * std::abs(t_rq), "der.T_rq",
          "inconsistent with x_rq/(omega0*r_rq)");
}

void validate(const UnitParams& p) {
  validate(p.gen);
  validate(p.tur);
  validate(p.gov);
  validate(p.der, p.gen);
  require(p.gamma > 0.0, "gamma", "must be positive");
}

UnitParams make_unit_params(const GeneratorRatings& gen, const TurbineParams& tur,
                            const GovernorParams& gov, double gamma) {
  UnitParams p;
  p.gen = gen;
  p.tur = tur;
  p.gov = gov;
  p.gamma = gamma;
  p.der = derive_params(gen);
  validate(p);
  return p;
}

UnitParams sayano_defaults() {
  GeneratorRatings gen;
  gen.omega0 = 2.0 * M_PI * 142.8 / 60.0;  // tabulated 142.8 is rpm-scale
  gen.r = 0.0034;
  gen.x_s = 0.184;
  gen.x_d = 1.58;
  gen.x_q = 0.97;
  gen.x_d_prime = 0.43;
  gen.x_d_dprime = 0.3;
  gen.x_q_dprime = 0.31;
  gen.T_r = 8.21;
  gen.T_d_dprime = 0.143;
  gen.J = 25.5e6;
  gen.E_r = 530.0;
  gen.U_nom = 15.75e3;
  gen.theta0 = std::acos(0.9);
  // Base power is not tabulated (the machine rating would suggest
  // 640 MW / 0.9 = 711 MVA, which leaves every operating point stable).
  // The calibrated value below places the voltage window of oscillatory
  // operation around 0.89 U_nom; see README, "Calibration".
  gen.S_b = 240.0;
  gen.r_rd = 0.1246;
  gen.r_rq = 0.0823;

  TurbineParams tur;
  tur.S_area = M_PI / 4.0 * 7.5 * 7.5;
  tur.l = 192.0;  // modeling value; the turbine table lists 212 m
  tur.rho_w = 0.98e3;
  tur.p_u = 2.7e6;
  tur.p_l = 0.35e6;
  tur.C = 0.27;
  tur.k = 40.0;
  tur.Q_max = 358.0;

  GovernorParams gov;
  gov.z = 0.002;
  // sigma and T_c are not tabulated; calibrated together with S_b (see
  // README, "Calibration").
  gov.sigma = 2.0;
  gov.T_c = 1.3;
  gov.rho_o = -0.1;
  gov.rho_c = 0.1;
  gov.mu_min = 0.05;
  gov.mu_max = 1.0;

  return make_unit_params(gen, tur, gov, 1.0);
}

}  // namespace hydro
