#include "hydro/model.hpp"

#include <cmath>

#include "hydro/errors.hpp"
#include "hydro/governor.hpp"

namespace hydro {

double turbine_torque_pu(double Q, double mu, double s, const UnitParams& params) {
  if (!(mu > 0.0)) throw ParameterError("turbine_torque_pu: mu must be positive");
  if (!(1.0 + s > 0.0)) throw ParameterError("turbine_torque_pu: requires s > -1");
  const double c_mu = params.tur.C * mu;
  const double w0 = params.gen.omega0;
  return params.tur.k * Q * Q * Q / (c_mu * c_mu * w0 * w0 * (1.0 + s));
}

Model::Model(const UnitParams& params) : params_(params), inverter_(params) {
  d_flow_ = params_.tur.S_area / (params_.tur.l * params_.tur.rho_w);
}

ElectricalSolution Model::electrical(const State& x) const {
  ElectricalSolution e =
      inverter_.invert(x.psi_d, x.psi_q, x.psi_r, x.psi_rd, x.psi_rq);
  e.M_G_pu = generator_torque_pu(x.psi_d, x.psi_q, e.i_d, e.i_q);
  e.P = instantaneous_power(e.i_d, e.i_q, params_.U(),
                            params_.gen.theta0 + x.theta_delta);
  return e;
}

State Model::rhs(const State& x) const {
  const auto& gen = params_.gen;
  const auto& tur = params_.tur;
  const auto& der = params_.der;
  const double mu = params_.mu_0 + x.mu_delta;
  if (!(mu > 0.0)) throw ParameterError("rhs: mu_0 + mu_delta must be positive");
  if (!(1.0 + x.s > 0.0)) throw ParameterError("rhs: requires s > -1");

  const ElectricalSolution e =
      inverter_.invert(x.psi_d, x.psi_q, x.psi_r, x.psi_rd, x.psi_rq);

  const double w0 = gen.omega0;
  const double ws = w0 * (1.0 + x.s);
  const double theta = gen.theta0 + x.theta_delta;
  const double U = params_.U();
  const double c_mu = tur.C * mu;
  const double head = x.Q * x.Q / (c_mu * c_mu);

  State f;
  f.theta_delta = w0 * x.s;
  f.s = (tur.k * x.Q * head / (w0 * w0 * (1.0 + x.s)) -
         (x.psi_d * e.i_q - x.psi_q * e.i_d)) /
        der.T_J;
  f.Q = d_flow_ * (tur.p_u - tur.p_l - head);
  f.psi_d = -ws * x.psi_q - w0 * gen.r * e.i_d + w0 * U * std::sin(theta);
  f.psi_q = ws * x.psi_d - w0 * gen.r * e.i_q - w0 * U * std::cos(theta);
  f.psi_r = (gen.E_r - e.E_q) / gen.T_r;
  f.psi_rd = -e.E_rq / der.T_rd;
  f.psi_rq = e.E_rd / der.T_rq;
  f.mu_delta = governor_rate(x.s, x.mu_delta, params_.mu_0, params_.gov);
  return f;
}

State rhs(const State& x, const UnitParams& params) { return Model(params).rhs(x); }

}  // namespace hydro
