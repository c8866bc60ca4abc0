#pragma once

#include <string>

namespace hydro {

/// Synchronous-generator ratings and base quantities (config inputs).
/// Reactances and resistances are per-unit; U_nom and E_r carry the raw
/// voltage-scale numbers the torque constant k was fitted against.
struct GeneratorRatings {
  double omega0 = 0.0;       ///< rated angular speed [rad/s]
  double r = 0.0;            ///< stator resistance [p.u.]
  double x_s = 0.0;          ///< stator leakage reactance [p.u.]
  double x_d = 0.0;          ///< d-axis synchronous reactance [p.u.]
  double x_q = 0.0;          ///< q-axis synchronous reactance [p.u.]
  double x_d_prime = 0.0;    ///< transient reactance [p.u.]
  double x_d_dprime = 0.0;   ///< d-axis sub-transient reactance [p.u.]
  double x_q_dprime = 0.0;   ///< q-axis sub-transient reactance [p.u.]
  double T_r = 0.0;          ///< field-winding time constant [s]
  double T_d_dprime = 0.0;   ///< sub-transient time constant [s]
  double J = 0.0;            ///< moment of inertia [kg*m^2]
  double E_r = 0.0;          ///< field voltage (same scale as U_nom)
  double U_nom = 0.0;        ///< rated stator voltage [V]
  double theta0 = 0.0;       ///< operating electrical angle [rad]
  double S_b = 0.0;          ///< base power [W]
  double r_rd = 0.0;         ///< d-axis damper resistance [p.u.] (config input)
  double r_rq = 0.0;         ///< q-axis damper resistance [p.u.] (config input)
};

/// Reactances and time constants computed from the ratings.
struct DerivedElectricalParams {
  double x_ad = 0.0;
  double x_aq = 0.0;
  double x_r = 0.0;
  double x_rd = 0.0;
  double x_rq = 0.0;
  double x_sr = 0.0;
  double r_rd = 0.0;
  double r_rq = 0.0;
  double T_rd = 0.0;
  double T_rq = 0.0;
  double T_J = 0.0;  ///< inertial constant J*omega0^2/S_b [s]
};

struct TurbineParams {
  double S_area = 0.0;  ///< penstock cross-section [m^2]
  double l = 0.0;       ///< penstock length [m]
  double rho_w = 0.0;   ///< water density [kg/m^3]
  double p_u = 0.0;     ///< upper penstock pressure [Pa]
  double p_l = 0.0;     ///< lower penstock pressure [Pa]
  double C = 0.0;       ///< penstock constant [m^3*sqrt(m)/sqrt(kg)]
  double k = 0.0;       ///< torque constant (absorbs the per-unit base)
  double Q_max = 0.0;   ///< maximum flow [m^3/s]
};

struct GovernorParams {
  double z = 0.0;        ///< deadband width [p.u.]
  double sigma = 0.0;    ///< open-loop transmission coefficient
  double T_c = 0.0;      ///< servomotor time constant [s]
  double rho_o = 0.0;    ///< max opening rate (negative) [p.u./s]
  double rho_c = 0.0;    ///< max closing rate (positive) [p.u./s]
  double mu_min = 0.0;   ///< lower vane stop [p.u.]
  double mu_max = 0.0;   ///< upper vane stop [p.u.]
};

/// Numeric knobs, all exposed in config.
struct Tolerances {
  double eq_residual = 1e-8;     ///< equilibrium residual target
  double cond_threshold = 1e12;  ///< linear-solve condition limit
  int theta_grid = 2048;         ///< bracketing grid for theta roots
  int newton_max_iter = 50;
  double routh_tol_rel = 1e-9;   ///< Routh first-column tolerance, relative to max |coeff|
  double marginal_band = 1e-7;   ///< |margin| below this is classified marginal
};

struct UnitParams {
  GeneratorRatings gen;
  DerivedElectricalParams der;
  TurbineParams tur;
  GovernorParams gov;
  Tolerances tol;
  double gamma = 1.0;  ///< applied voltage as a fraction of U_nom
  double mu_0 = 0.0;   ///< operating vane position (set from the balance equation)

  double U() const { return gamma * gen.U_nom; }
};

/// Computes the derived reactances and time constants from the ratings.
/// r_rd and r_rq are copied from the ratings (see damper_resistance_note);
/// T_rd = x_rd/(omega0*r_rd), T_rq = x_rq/(omega0*r_rq), T_J = J*omega0^2/S_b.
/// Throws ParameterError on division guards (x_d == x_d', vanishing
/// reciprocal brackets, zero resistances).
DerivedElectricalParams derive_params(const GeneratorRatings& gen);

/// The damper-resistance formulas printed alongside the parameter tables.
/// They do not reproduce the tabulated r_rd = 0.1246, r_rq = 0.0823 (the
/// tabulated values are used as config defaults); this path exists so the
/// inconsistency can be inspected. `note` receives a short description of
/// the mismatch against the ratings' configured values.
struct DamperResistances {
  double r_rd = 0.0;
  double r_rq = 0.0;
};
DamperResistances damper_resistances_from_formulas(const GeneratorRatings& gen,
                                                   std::string* note = nullptr);

/// Validation: throws ParameterError naming the offending key path.
void validate(const GeneratorRatings& gen);
void validate(const TurbineParams& tur);
void validate(const GovernorParams& gov);
void validate(const DerivedElectricalParams& der, const GeneratorRatings& gen);
void validate(const UnitParams& p);

/// Assembles UnitParams from the component blocks: derives the electrical
/// parameters, validates everything. mu_0 is left at 0; callers obtain it
/// from the balance equation (equilibria module) or config.
UnitParams make_unit_params(const GeneratorRatings& gen, const TurbineParams& tur,
                            const GovernorParams& gov, double gamma = 1.0);

/// The full parameter set of the studied plant: tabulated ratings plus the
/// documented calibration defaults for the values the tables omit.
UnitParams sayano_defaults();

}  // namespace hydro
