#pragma once

#include "hydro/electrical.hpp"
#include "hydro/params.hpp"
#include "hydro/state.hpp"

namespace hydro {

/// Turbine torque k Q^3 / (C^2 mu^2 omega0^2 (1+s)), mu the full vane
/// opening. Throws ParameterError for mu <= 0 or s <= -1.
double turbine_torque_pu(double Q, double mu, double s, const UnitParams& params);

/// Right-hand side of the nine-state unit model. Binds the parameter set
/// and the factored flux inversion once; evaluation is allocation-free and
/// safe to call from many threads.
class Model {
 public:
  explicit Model(const UnitParams& params);

  const UnitParams& params() const { return params_; }
  const FluxInverter& inverter() const { return inverter_; }

  /// Currents, EMFs, torque and power at a state.
  ElectricalSolution electrical(const State& x) const;

  /// The nine time derivatives.
  State rhs(const State& x) const;

 private:
  UnitParams params_;
  FluxInverter inverter_;
  double d_flow_;  // S_area / (l * rho_w)
};

/// One-shot rhs evaluation (factors the inversion per call; use Model in
/// loops).
State rhs(const State& x, const UnitParams& params);

}  // namespace hydro
