#pragma once

#include <array>

#include "hydro/params.hpp"

namespace hydro {

/// Coefficients of the algebraic inversion of the flux-linkage relations.
/// a1..a7 are the reactance ratios entering the linear system; the X/Y/Z/P/Q
/// groups express the solved currents and EMFs directly in the fluxes.
struct InversionCoefficients {
  double a1 = 0, a2 = 0, a3 = 0, a4 = 0, a5 = 0, a6 = 0, a7 = 0;
  double b1 = 0;
  double X_d = 0, X_r = 0, X_rd = 0;
  double Y_q = 0, Y_rq = 0;
  double Z_d = 0, Z_r = 0, Z_rd = 0;
  double P_q = 0, P_rq = 0;
  double Q_d = 0, Q_r = 0, Q_rd = 0;
};

/// Evaluates the closed-form inversion coefficients. Throws ParameterError
/// when a division guard fails (b1 = 0, a2 = a7, a4 = 1 or a6 = 1).
InversionCoefficients inversion_coefficients(const DerivedElectricalParams& der,
                                             const GeneratorRatings& gen);

/// Algebraic outputs of the electrical subsystem at one state.
struct ElectricalSolution {
  double i_d = 0, i_q = 0;          ///< stator currents
  double E_q = 0, E_rd = 0, E_rq = 0;  ///< rotor EMFs
  double M_G_pu = 0;                ///< generator torque psi_d*i_q - psi_q*i_d
  double P = 0;                     ///< instantaneous power
};

/// Inverts the five linear flux-linkage relations
///   psi_d  = x_d i_d  + E_q      + E_rq
///   psi_q  = x_q i_q  - E_rd
///   psi_r  = a3 i_d   + E_q      + a4 E_rq
///   psi_rd = a5 i_d   + a6 E_q   + E_rq
///   psi_rq = a7 i_q   - E_rd
/// for (i_d, E_q, E_rq) and (i_q, E_rd). The d-axis 3x3 block and the
/// q-axis 2x2 block are factored once per parameter set; the closed-form
/// coefficient path is kept as an independent cross-check route.
class FluxInverter {
 public:
  enum class Path { direct_solve, closed_form };

  /// Factors both blocks; throws NumericError if a block's condition
  /// number exceeds params.tol.cond_threshold.
  explicit FluxInverter(const UnitParams& params);

  /// Currents and EMFs for the given fluxes (M_G_pu and P left zero).
  ElectricalSolution invert(double psi_d, double psi_q, double psi_r, double psi_rd,
                            double psi_rq, Path path = Path::direct_solve) const;

  /// Forward substitution: fluxes produced by a (currents, EMFs) tuple.
  std::array<double, 5> substitute(const ElectricalSolution& sol) const;

  const InversionCoefficients& coefficients() const { return coef_; }
  double d_block_condition() const { return cond_d_; }
  double q_block_condition() const { return cond_q_; }

 private:
  InversionCoefficients coef_;
  // Rows of the inverted d-axis block (i_d, E_q, E_rq) and q-axis block
  // (i_q, E_rd), applied as plain dot products in the integrator's hot loop.
  double di_[3][3] = {};
  double qi_[2][2] = {};
  double cond_d_ = 0, cond_q_ = 0;
};

/// One-shot convenience wrapper around FluxInverter (factors per call;
/// use the class inside loops).
ElectricalSolution flux_inverse(double psi_d, double psi_q, double psi_r,
                                double psi_rd, double psi_rq, const UnitParams& params,
                                FluxInverter::Path path = FluxInverter::Path::direct_solve);

/// Generator torque in per-unit values.
inline double generator_torque_pu(double psi_d, double psi_q, double i_d, double i_q) {
  return psi_d * i_q - psi_q * i_d;
}

/// Instantaneous electrical power, -(3/2)(i_d U sin(theta) + i_q U cos(theta)).
/// Negative values correspond to delivery into the network (load convention).
double instantaneous_power(double i_d, double i_q, double U, double theta);

}  // namespace hydro
