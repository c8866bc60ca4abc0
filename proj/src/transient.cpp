#include "hydro/transient.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hydro/equilibria.hpp"
#include "hydro/errors.hpp"
#include "hydro/model.hpp"
#include "hydro/parallel.hpp"

namespace hydro {

namespace {

State rk4_step(const Model& m, const State& x, double dt) {
  const State k1 = m.rhs(x);
  const State k2 = m.rhs(axpy(x, 0.5 * dt, k1));
  const State k3 = m.rhs(axpy(x, 0.5 * dt, k2));
  const State k4 = m.rhs(axpy(x, dt, k3));
  State out = x;
  const double w = dt / 6.0;
  for (int i = 0; i < kStateDim; ++i) {
    out[i] = x[i] + w * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

int stop_zone(double mu_delta, double lo, double hi) {
  if (mu_delta <= lo) return -1;
  if (mu_delta >= hi) return 1;
  return 0;
}

int deadband_zone(double s, double half_z) {
  if (half_z <= 0.0) return 0;
  if (s >= half_z) return 1;
  if (s <= -half_z) return -1;
  return 0;
}

}  // namespace

Trajectory integrate(const State& x0, const UnitParams& params,
                     const IntegrationConfig& cfg) {
  if (!(cfg.dt > 0.0 && cfg.dt <= 1e-3)) {
    throw ParameterError("integration.dt: must lie in (0, 1e-3]");
  }
  if (!(cfg.T_discard < cfg.T_end)) {
    throw ParameterError("integration.T_discard: must be below T_end");
  }
  if (cfg.record_stride < 1) {
    throw ParameterError("integration.record_stride: must be >= 1");
  }
  if (!x0.finite()) throw ParameterError("integrate: x0 must be finite");
  if (!(params.mu_0 + x0.mu_delta > 0.0)) {
    throw ParameterError("integrate: mu_0 + mu_delta(0) must be positive");
  }

  const Model model(params);
  const double lo = params.gov.mu_min - params.mu_0;
  const double hi = params.gov.mu_max - params.mu_0;
  const double half_z = 0.5 * params.gov.z;

  Trajectory traj;
  traj.dt_record = cfg.dt * cfg.record_stride;
  const long n_steps = std::lround(cfg.T_end / cfg.dt);
  traj.times.reserve(n_steps / cfg.record_stride + 2);
  traj.states.reserve(n_steps / cfg.record_stride + 2);

  State x = x0;
  if (cfg.clamp_mu && (x.mu_delta < lo || x.mu_delta > hi)) {
    x.mu_delta = std::clamp(x.mu_delta, lo, hi);
    traj.events.push_back({0.0, EventKind::stop_hit});
  }
  int at_stop = stop_zone(x.mu_delta, lo, hi);
  int db_zone = deadband_zone(x.s, half_z);

  traj.times.push_back(0.0);
  traj.states.push_back(x);

  for (long step = 1; step <= n_steps; ++step) {
    const double t = step * cfg.dt;
    try {
      x = rk4_step(model, x, cfg.dt);
    } catch (const ParameterError&) {
      // A stage evaluation left the admissible region (gate closed through
      // zero or the speed fell to -1): the trajectory is blowing up.
      std::ostringstream os;
      os << "integrate: trajectory left the admissible domain at t=" << t << " s";
      throw DivergenceError(os.str(), t);
    }
    if (cfg.clamp_mu) x.mu_delta = std::clamp(x.mu_delta, lo, hi);

    double worst = 0.0;
    for (int i = 0; i < kStateDim; ++i) worst = std::max(worst, std::abs(x[i]));
    if (!(worst < 1e9) || !x.finite()) {
      std::ostringstream os;
      os << "integrate: trajectory diverged at t=" << t << " s";
      throw DivergenceError(os.str(), t);
    }

    const int stop_now = stop_zone(x.mu_delta, lo, hi);
    if (stop_now != at_stop) {
      traj.events.push_back(
          {t, stop_now != 0 ? EventKind::stop_hit : EventKind::stop_release});
      at_stop = stop_now;
    }
    const int db_now = deadband_zone(x.s, half_z);
    if (db_now != db_zone) {
      traj.events.push_back({t, EventKind::deadband_cross});
      db_zone = db_now;
    }

    if (step % cfg.record_stride == 0) {
      traj.times.push_back(t);
      traj.states.push_back(x);
    }
  }
  return traj;
}

const char* regime_kind_name(RegimeKind k) {
  switch (k) {
    case RegimeKind::equilibrium: return "equilibrium";
    case RegimeKind::limit_cycle: return "limit_cycle";
    default: return "unresolved";
  }
}

RegimeReport classify_regime(const Trajectory& traj, const RegimeTolerances& tols,
                             double t_discard) {
  if (traj.states.empty()) throw ParameterError("classify_regime: empty trajectory");
  if (traj.times.back() <= t_discard) {
    throw ParameterError("classify_regime: T_discard has not elapsed");
  }

  size_t begin = 0;
  while (begin < traj.times.size() && traj.times[begin] < t_discard) ++begin;
  const size_t n = traj.states.size();

  RegimeReport rep;
  rep.final_state = traj.states.back();

  auto window_amplitude = [&](size_t from, int var) {
    double lo = traj.states[from][var], hi = lo;
    for (size_t i = from; i < n; ++i) {
      lo = std::min(lo, traj.states[i][var]);
      hi = std::max(hi, traj.states[i][var]);
    }
    return hi - lo;
  };

  for (int v = 0; v < kStateDim; ++v) rep.amplitude[v] = window_amplitude(begin, v);

  // Settled tail: trailing quarter of the post-discard window. A decaying
  // transient whose tail is flat still counts as an equilibrium.
  const size_t tail = begin + (n - begin) * 3 / 4;
  double tail_amp = 0.0;
  for (int v = 0; v < kStateDim; ++v) tail_amp = std::max(tail_amp, window_amplitude(tail, v));
  if (tail_amp < tols.eq_tol) {
    rep.kind = RegimeKind::equilibrium;
    for (int v = 0; v < kStateDim; ++v) rep.amplitude[v] = window_amplitude(tail, v);
    return rep;
  }

  const double amp_s = rep.amplitude[1];
  if (amp_s <= tols.cycle_tol) {
    rep.kind = RegimeKind::unresolved;
    return rep;
  }

  // Peak detection on the s signal: alternating extremes with hysteresis
  // cycle_tol/2 to suppress noise-level wiggles. Peaks inside the leading
  // 5% of the analysis window are excluded from the period statistics; a
  // cycle that locks near the discard boundary would otherwise contaminate
  // the spacing sequence with one transient interval.
  const double settle_end =
      t_discard + 0.05 * (traj.times.back() - t_discard);
  const double hyst = 0.5 * tols.cycle_tol;
  std::vector<double> peak_times;
  bool looking_for_max = true;
  double extreme = traj.states[begin].s;
  double extreme_t = traj.times[begin];
  for (size_t i = begin + 1; i < n; ++i) {
    const double v = traj.states[i].s;
    if (looking_for_max) {
      if (v > extreme) {
        extreme = v;
        extreme_t = traj.times[i];
      } else if (v < extreme - hyst) {
        if (extreme_t >= settle_end) peak_times.push_back(extreme_t);
        looking_for_max = false;
        extreme = v;
        extreme_t = traj.times[i];
      }
    } else {
      if (v < extreme) {
        extreme = v;
        extreme_t = traj.times[i];
      } else if (v > extreme + hyst) {
        looking_for_max = true;
        extreme = v;
        extreme_t = traj.times[i];
      }
    }
  }

  if (peak_times.size() < 4) {
    std::ostringstream os;
    os << "classify_regime: only " << peak_times.size()
       << " peaks in the analysis window; need 4 for a cycle claim";
    throw NumericError(os.str());
  }

  std::vector<double> spacings;
  for (size_t i = 1; i < peak_times.size(); ++i) {
    spacings.push_back(peak_times[i] - peak_times[i - 1]);
  }
  double mean = 0.0;
  for (double sp : spacings) mean += sp;
  mean /= spacings.size();
  bool regular = mean > 0.0;
  for (double sp : spacings) {
    if (std::abs(sp - mean) > tols.peak_jitter * mean) {
      regular = false;
      break;
    }
  }

  if (regular) {
    rep.kind = RegimeKind::limit_cycle;
    rep.period = mean;
  } else {
    rep.kind = RegimeKind::unresolved;
  }
  return rep;
}

namespace {

ScenarioSegment run_segment(double gamma, const State& x0, const UnitParams& base,
                            const IntegrationConfig& cfg, const RegimeTolerances& tols) {
  ScenarioSegment seg;
  seg.gamma = gamma;
  UnitParams p = base;
  p.gamma = gamma;
  p.mu_0 = solve_mu0(gamma, p).mu_0;
  seg.mu_0 = p.mu_0;
  seg.trajectory = integrate(x0, p, cfg);
  seg.report = classify_regime(seg.trajectory, tols, cfg.T_discard);
  seg.report.gamma = gamma;
  return seg;
}

/// Re-dispatching the operating point changes mu_0; the physical gate
/// position mu_0 + mu_delta stays continuous across the step, so the
/// deviation state absorbs the difference.
State carry_state(const State& x, double mu0_from, double mu0_to) {
  State out = x;
  out.mu_delta += mu0_from - mu0_to;
  return out;
}

State scenario_start(const IntegrationConfig& cfg) {
  if (cfg.x0_override) return *cfg.x0_override;
  State x;
  x.s = 1.0;
  return x;
}

}  // namespace

ScenarioResult run_scenario(Scenario scenario, const UnitParams& params,
                            const IntegrationConfig& cfg, const RegimeTolerances& tols,
                            bool cold_start) {
  std::vector<double> gammas;
  switch (scenario) {
    case Scenario::rated: gammas = {1.0}; break;
    case Scenario::reduced_089: gammas = {1.0, 0.89}; break;
    case Scenario::reduced_07: gammas = {1.0, 0.89, 0.7}; break;
  }
  if (cold_start) gammas = {gammas.back()};

  ScenarioResult result;
  State x0 = scenario_start(cfg);
  for (double gamma : gammas) {
    if (!result.segments.empty()) {
      const ScenarioSegment& prev = result.segments.back();
      x0 = carry_state(prev.report.final_state, prev.mu_0,
                       solve_mu0(gamma, params).mu_0);
    }
    result.segments.push_back(run_segment(gamma, x0, params, cfg, tols));
  }
  return result;
}

ScenarioResult run_custom(double gamma, const State& x0, const UnitParams& params,
                          const IntegrationConfig& cfg, const RegimeTolerances& tols) {
  ScenarioResult result;
  result.segments.push_back(run_segment(gamma, x0, params, cfg, tols));
  return result;
}

std::vector<AmplitudePoint> amplitude_sweep(const std::vector<double>& beta_grid,
                                            const UnitParams& params,
                                            const IntegrationConfig& cfg,
                                            const RegimeTolerances& tols, int jobs) {
  for (size_t i = 1; i < beta_grid.size(); ++i) {
    if (!(beta_grid[i] > beta_grid[i - 1])) {
      throw ParameterError("amplitude_sweep: grid must be ascending");
    }
  }
  if (!beta_grid.empty() &&
      (beta_grid.front() <= 0.0 || beta_grid.back() > 1.2)) {
    throw ParameterError("amplitude_sweep: grid must lie within (0, 1.2]");
  }

  // Shared starting point: the settled rated regime.
  const ScenarioSegment rated =
      run_segment(1.0, scenario_start(cfg), params, cfg, tols);

  std::vector<AmplitudePoint> out(beta_grid.size());
  parallel_for(static_cast<int>(beta_grid.size()), jobs, [&](int i) {
    AmplitudePoint& pt = out[i];
    pt.beta = beta_grid[i];
    try {
      const State from_rated =
          carry_state(rated.report.final_state, rated.mu_0,
                      solve_mu0(beta_grid[i], params).mu_0);
      const ScenarioSegment seg =
          run_segment(beta_grid[i], from_rated, params, cfg, tols);
      pt.kind = seg.report.kind;
      pt.amplitude_s =
          seg.report.kind == RegimeKind::equilibrium ? 0.0 : seg.report.amplitude[1];
      pt.period = seg.report.period;
      pt.ok = 1;
    } catch (const Error& e) {
      pt.kind = RegimeKind::unresolved;
      pt.message = e.what();
    }
  });
  return out;
}

}  // namespace hydro
