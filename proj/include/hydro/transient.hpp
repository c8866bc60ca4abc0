#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hydro/params.hpp"
#include "hydro/state.hpp"

namespace hydro {

struct IntegrationConfig {
  double dt = 2e-4;        ///< fixed step [s]
  double T_end = 1000.0;   ///< horizon [s]
  double T_discard = 600.0;  ///< transient discard for classification [s]
  int record_stride = 50;  ///< sample decimation
  bool clamp_mu = true;    ///< enforce the vane stops after each step
  std::optional<State> x0_override;  ///< replaces the built-in scenario start
};

/// Thresholds for regime classification.
struct RegimeTolerances {
  double eq_tol = 1e-6;     ///< max settled amplitude for an equilibrium call
  double cycle_tol = 1e-4;  ///< min s amplitude for a limit-cycle call
  double peak_jitter = 0.05;  ///< max relative spread of peak spacings
};

enum class EventKind { stop_hit, stop_release, deadband_cross };

struct Event {
  double time = 0.0;
  EventKind kind = EventKind::stop_hit;
};

struct Trajectory {
  double dt_record = 0.0;  ///< dt * record_stride
  std::vector<double> times;
  std::vector<State> states;
  std::vector<Event> events;
};

/// Classical fixed-step fourth-order Runge-Kutta on the unit model.
/// After each step mu_delta is clamped to [mu_min - mu_0, mu_max - mu_0]
/// (the servomotor stroke stops); stop and deadband crossings are recorded
/// as events. Deterministic for fixed inputs. Throws DivergenceError when
/// a component exceeds 1e9 or becomes non-finite.
Trajectory integrate(const State& x0, const UnitParams& params,
                     const IntegrationConfig& cfg);

enum class RegimeKind { equilibrium, limit_cycle, unresolved };

const char* regime_kind_name(RegimeKind k);

struct RegimeReport {
  RegimeKind kind = RegimeKind::unresolved;
  std::array<double, kStateDim> amplitude{};  ///< per-variable peak-to-peak
  std::optional<double> period;               ///< mean peak spacing [s]
  State final_state;
  double gamma = 1.0;
};

/// Classifies the post-discard window of a trajectory. An equilibrium call
/// requires the settled tail (trailing quarter of the window) to move less
/// than eq_tol in every variable; a limit-cycle call requires s amplitude
/// above cycle_tol with at least four regularly spaced peaks. Throws
/// NumericError (insufficient data) when a cycle-sized signal has fewer
/// than four peaks.
RegimeReport classify_regime(const Trajectory& traj, const RegimeTolerances& tols,
                             double t_discard);

enum class Scenario { rated, reduced_089, reduced_07 };

/// One voltage segment of a scenario chain.
struct ScenarioSegment {
  double gamma = 1.0;
  double mu_0 = 0.0;
  Trajectory trajectory;
  RegimeReport report;
};

struct ScenarioResult {
  std::vector<ScenarioSegment> segments;
  const ScenarioSegment& final_segment() const { return segments.back(); }
};

/// Runs a scenario. The rated segment starts from
/// (0, 1, 0, 0, 0, 0, 0, 0, 0) unless cfg.x0_override is set; each reduced
/// segment starts from the final state of the preceding regime with the
/// voltage stepped at t = 0. cold_start instead begins the target segment
/// directly from the built-in initial state.
ScenarioResult run_scenario(Scenario scenario, const UnitParams& params,
                            const IntegrationConfig& cfg, const RegimeTolerances& tols,
                            bool cold_start = false);

/// Single custom segment at the given voltage ratio and initial state.
ScenarioResult run_custom(double gamma, const State& x0, const UnitParams& params,
                          const IntegrationConfig& cfg, const RegimeTolerances& tols);

struct AmplitudePoint {
  double beta = 0.0;
  RegimeKind kind = RegimeKind::unresolved;
  double amplitude_s = 0.0;  ///< 0 for an equilibrium
  std::optional<double> period;
  std::uint8_t ok = 0;
  std::string message;
};

/// Oscillation amplitude against voltage: for each beta the voltage is
/// stepped from the rated regime's final state and the response classified.
/// Per-point failures are recorded as unresolved rows. jobs <= 1 runs the
/// serial reference path.
std::vector<AmplitudePoint> amplitude_sweep(const std::vector<double>& beta_grid,
                                            const UnitParams& params,
                                            const IntegrationConfig& cfg,
                                            const RegimeTolerances& tols,
                                            int jobs = 1);

}  // namespace hydro
