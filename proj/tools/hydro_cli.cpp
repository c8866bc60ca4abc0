// Command-line front end: equilibrium curves, stability sweeps, transient
// scenarios, amplitude sweeps and the self-check suite. Every command
// writes its artifacts plus a manifest.json with content digests under
// --out.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <random>
#include <sstream>

#include "hydro/equilibria.hpp"
#include "hydro/errors.hpp"
#include "hydro/fd.hpp"
#include "hydro/io/config.hpp"
#include "hydro/io/csv.hpp"
#include "hydro/io/manifest.hpp"
#include "hydro/io/svg.hpp"
#include "hydro/model.hpp"
#include "hydro/parallel.hpp"
#include "hydro/stability.hpp"
#include "hydro/transient.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hydro;

namespace {

constexpr const char* kVersion = HYDRO_VERSION;

struct CommonOpts {
  std::string config_path;
  std::string out_dir = "out";
  int jobs = 1;
  uint64_t seed = 20090817;
  std::vector<std::string> argv_copy;
};

io::AppConfig load(const CommonOpts& opts) {
  if (opts.config_path.empty()) return io::default_config();
  return io::load_config(opts.config_path);
}

io::RunManifest start_manifest(const CommonOpts& opts, const io::AppConfig& cfg) {
  io::RunManifest m;
  std::ostringstream cl;
  for (size_t i = 0; i < opts.argv_copy.size(); ++i) {
    cl << (i ? " " : "") << opts.argv_copy[i];
  }
  m.command_line = cl.str();
  m.config_hash = io::config_hash(cfg);
  m.tool_version = kVersion;
  m.timestamp = io::utc_timestamp();
  return m;
}

std::string out_path(const CommonOpts& opts, const std::string& name) {
  fs::create_directories(opts.out_dir);
  return (fs::path(opts.out_dir) / name).string();
}

std::vector<double> parse_grid(const std::string& spec, double lone_value) {
  // "a:b:n" -> n ascending points from a to b; empty -> {lone_value}.
  if (spec.empty()) return {lone_value};
  std::vector<double> grid;
  double a = 0, b = 0;
  int n = 0;
  if (std::sscanf(spec.c_str(), "%lf:%lf:%d", &a, &b, &n) != 3 || n < 1 || b < a) {
    throw ParameterError("grid: expected a:b:n with b >= a, n >= 1, got " + spec);
  }
  for (int i = 0; i < n; ++i) {
    grid.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
  }
  return grid;
}

std::string fmt(double v) { return io::format_double(v); }

const char* stability_name(Stability s) {
  switch (s) {
    case Stability::stable: return "stable";
    case Stability::unstable: return "unstable";
    default: return "marginal";
  }
}

json window_json(const StabilityWindow& w) {
  json j;
  j["found"] = w.found;
  if (w.found) {
    j["gamma_lo"] = w.gamma_lo;
    j["gamma_hi"] = w.gamma_hi;
  }
  return j;
}

void write_json(const std::string& path, const json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path);
  out << doc.dump(2) << "\n";
  if (!out) throw Error("write failure on " + path);
}

// ---------------------------------------------------------------------------

int cmd_equilibria(const CommonOpts& opts, const std::string& grid_spec,
                   double gamma) {
  const io::AppConfig cfg = load(opts);
  io::RunManifest manifest = start_manifest(opts, cfg);

  const std::vector<double> grid = parse_grid(grid_spec, gamma);
  const BalanceCurve curve = balance_curves(grid, cfg.params, opts.jobs);

  const std::string csv_path = out_path(opts, "balance_curve.csv");
  io::CsvWriter csv(csv_path, "hydro.balance_curve", 1,
                    {"gamma", "mu0", "saturated", "theta", "power", "residual"});
  for (size_t i = 0; i < grid.size(); ++i) {
    csv.row({fmt(curve.gamma_grid[i]), fmt(curve.mu0_values[i]),
             curve.saturated[i] ? "1" : "0", fmt(curve.theta_values[i]),
             fmt(curve.power_values[i]), fmt(curve.residuals[i])});
  }
  csv.close();
  io::add_output(manifest, csv_path);

  json per_point = json::array();
  int gaps = 0;
  for (size_t i = 0; i < grid.size(); ++i) {
    json row;
    row["gamma"] = curve.gamma_grid[i];
    row["ok"] = curve.ok[i] != 0;
    if (curve.ok[i]) {
      row["mu0"] = curve.mu0_values[i];
      row["saturated"] = curve.saturated[i] != 0;
      row["theta"] = curve.theta_values[i];
      row["power"] = curve.power_values[i];
      row["residual"] = curve.residuals[i];
    } else {
      row["message"] = curve.messages[i];
      ++gaps;
    }
    per_point.push_back(row);
  }
  json doc;
  doc["points"] = per_point;
  doc["gaps"] = gaps;
  const std::string json_path = out_path(opts, "equilibria.json");
  write_json(json_path, doc);
  io::add_output(manifest, json_path);

  io::write_manifest(opts.out_dir, manifest);
  std::cout << "equilibria: " << grid.size() - gaps << "/" << grid.size()
            << " points, outputs in " << opts.out_dir << "\n";
  return 0;
}

int cmd_stability(const CommonOpts& opts, const std::string& grid_spec,
                  const std::string& mode_name) {
  const io::AppConfig cfg = load(opts);
  io::RunManifest manifest = start_manifest(opts, cfg);

  const std::vector<double> grid = parse_grid(grid_spec, cfg.params.gamma);
  const DeadbandMode mode = mode_name == "deadband" ? DeadbandMode::actual
                                                    : DeadbandMode::zero_deadband;
  const SweepResult sweep =
      stability_sweep(grid, cfg.params, opts.jobs, JacobianForm::corrected, mode);

  const std::string csv_path = out_path(opts, "stability.csv");
  io::CsvWriter csv(csv_path, "hydro.stability", 1,
                    {"gamma", "branch", "operating", "theta", "method", "stable",
                     "margin"});
  for (const auto& pt : sweep.points) {
    if (!pt.ok) continue;
    for (const auto& b : pt.branches) {
      csv.row({fmt(pt.gamma), std::to_string(b.branch),
               b.operating ? "1" : "0", fmt(b.theta), "routh_hurwitz",
               stability_name(b.rh.stable), fmt(b.rh.margin)});
      csv.row({fmt(pt.gamma), std::to_string(b.branch),
               b.operating ? "1" : "0", fmt(b.theta), "eigen_bound",
               stability_name(b.eig.stable), fmt(b.eig.margin)});
    }
  }
  csv.close();
  io::add_output(manifest, csv_path);

  json doc;
  doc["governor_linearization"] =
      mode == DeadbandMode::actual ? "deadband" : "zero_deadband";
  doc["window_eigen"] = window_json(sweep.window_eig);
  doc["window_routh_hurwitz"] = window_json(sweep.window_rh);
  json failures = json::array();
  for (const auto& pt : sweep.points) {
    if (!pt.ok) failures.push_back({{"gamma", pt.gamma}, {"message", pt.message}});
  }
  doc["failures"] = failures;
  const std::string json_path = out_path(opts, "window.json");
  write_json(json_path, doc);
  io::add_output(manifest, json_path);

  io::write_manifest(opts.out_dir, manifest);
  if (sweep.window_eig.found) {
    std::cout << "stability: eigen-path instability window [" << sweep.window_eig.gamma_lo
              << ", " << sweep.window_eig.gamma_hi << "]\n";
  } else {
    std::cout << "stability: no instability window on the grid\n";
  }
  return 0;
}

int cmd_simulate(const CommonOpts& opts, const std::string& scenario_name,
                 double gamma, bool cold_start, const std::string& svg_kind) {
  const io::AppConfig cfg = load(opts);
  io::RunManifest manifest = start_manifest(opts, cfg);

  ScenarioResult result;
  if (scenario_name == "rated") {
    result = run_scenario(Scenario::rated, cfg.params, cfg.integration, cfg.regime,
                          cold_start);
  } else if (scenario_name == "reduced_089") {
    result = run_scenario(Scenario::reduced_089, cfg.params, cfg.integration,
                          cfg.regime, cold_start);
  } else if (scenario_name == "reduced_07") {
    result = run_scenario(Scenario::reduced_07, cfg.params, cfg.integration,
                          cfg.regime, cold_start);
  } else if (scenario_name == "custom") {
    State x0;
    x0.s = 1.0;
    if (cfg.integration.x0_override) x0 = *cfg.integration.x0_override;
    result = run_custom(gamma, x0, cfg.params, cfg.integration, cfg.regime);
  } else {
    throw ParameterError("scenario: unknown name " + scenario_name);
  }

  const ScenarioSegment& seg = result.final_segment();
  const Trajectory& traj = seg.trajectory;

  const std::string csv_path = out_path(opts, "trajectory.csv");
  io::CsvWriter csv(csv_path, "hydro.trajectory", 1,
                    {"t", "theta_delta", "s", "Q", "psi_d", "psi_q", "psi_r",
                     "psi_rd", "psi_rq", "mu_delta"});
  for (size_t i = 0; i < traj.times.size(); ++i) {
    std::vector<std::string> cells;
    cells.push_back(fmt(traj.times[i]));
    for (int k = 0; k < kStateDim; ++k) cells.push_back(fmt(traj.states[i][k]));
    csv.row(cells);
  }
  csv.close();
  io::add_output(manifest, csv_path);

  json doc;
  json segs = json::array();
  for (const auto& s : result.segments) {
    json r;
    r["gamma"] = s.gamma;
    r["mu0"] = s.mu_0;
    r["kind"] = regime_kind_name(s.report.kind);
    json amp;
    for (int k = 0; k < kStateDim; ++k) {
      amp[state_component_name(k)] = s.report.amplitude[k];
    }
    r["amplitude"] = amp;
    if (s.report.period) r["period_s"] = *s.report.period;
    json fin = json::array();
    for (int k = 0; k < kStateDim; ++k) fin.push_back(s.report.final_state[k]);
    r["final_state"] = fin;
    r["events"] = s.trajectory.events.size();
    segs.push_back(r);
  }
  doc["segments"] = segs;
  doc["kind"] = regime_kind_name(seg.report.kind);
  const std::string json_path = out_path(opts, "regime.json");
  write_json(json_path, doc);
  io::add_output(manifest, json_path);

  if (!svg_kind.empty()) {
    const std::string svg_path = out_path(opts, "trajectory.svg");
    if (svg_kind == "projection3") {
      std::vector<double> a, b, c;
      for (const State& x : traj.states) {
        a.push_back(x.theta_delta);
        b.push_back(x.mu_delta);
        c.push_back(x.s);
      }
      io::svg_projection3(svg_path, "trajectory projection", a, b, c,
                          "theta_delta", "mu_delta", "s");
    } else if (svg_kind == "timeseries") {
      io::Series s_series, mu_series;
      s_series.label = "s";
      mu_series.label = "mu_delta";
      s_series.x = traj.times;
      mu_series.x = traj.times;
      for (const State& x : traj.states) {
        s_series.y.push_back(x.s);
        mu_series.y.push_back(x.mu_delta);
      }
      io::svg_plot(svg_path, "speed deviation and gate deviation", "t [s]", "value",
                   {s_series, mu_series});
    } else {
      throw ParameterError("svg: unknown kind " + svg_kind);
    }
    io::add_output(manifest, svg_path);
  }

  io::write_manifest(opts.out_dir, manifest);
  std::cout << "simulate: " << scenario_name << " -> "
            << regime_kind_name(seg.report.kind) << "\n";
  return 0;
}

int cmd_amplitude(const CommonOpts& opts, const std::string& grid_spec) {
  const io::AppConfig cfg = load(opts);
  io::RunManifest manifest = start_manifest(opts, cfg);

  std::vector<double> grid = parse_grid(grid_spec, 0.0);
  if (grid_spec.empty()) {
    grid.clear();
    for (double b = 0.80; b <= 1.0001; b += 0.02) grid.push_back(b);
  }
  const auto points =
      amplitude_sweep(grid, cfg.params, cfg.integration, cfg.regime, opts.jobs);

  const std::string csv_path = out_path(opts, "amplitude.csv");
  io::CsvWriter csv(csv_path, "hydro.amplitude", 1,
                    {"beta", "kind", "amplitude_s", "period_s"});
  std::vector<double> betas, amps;
  std::vector<std::string> kinds;
  for (const auto& pt : points) {
    csv.row({fmt(pt.beta), regime_kind_name(pt.kind), fmt(pt.amplitude_s),
             pt.period ? fmt(*pt.period) : "nan"});
    betas.push_back(pt.beta);
    amps.push_back(pt.amplitude_s);
    kinds.push_back(regime_kind_name(pt.kind));
  }
  csv.close();
  io::add_output(manifest, csv_path);

  const std::string svg_path = out_path(opts, "amplitude.svg");
  io::svg_sweep_band(svg_path, "oscillation amplitude vs voltage", betas, amps,
                     kinds);
  io::add_output(manifest, svg_path);

  io::write_manifest(opts.out_dir, manifest);
  std::cout << "amplitude: " << points.size() << " points\n";
  return 0;
}

struct CheckResult {
  std::string name;
  bool pass;
  std::string detail;
};

int cmd_check(const CommonOpts& opts, bool verbose) {
  const io::AppConfig cfg = load(opts);
  const UnitParams& p = cfg.params;
  std::vector<CheckResult> results;

  // 1. Flux-inversion roundtrip on seeded random fluxes.
  {
    const FluxInverter inv(p);
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
      const double f[5] = {u(rng), u(rng), u(rng), u(rng), u(rng)};
      const auto sol = inv.invert(f[0], f[1], f[2], f[3], f[4]);
      const auto back = inv.substitute(sol);
      for (int k = 0; k < 5; ++k) worst = std::max(worst, std::abs(back[k] - f[k]));
    }
    std::ostringstream d;
    d << "max residual " << worst;
    results.push_back({"flux_roundtrip", worst < 1e-10, d.str()});
  }

  // 2. Analytic vs finite-difference Jacobian at the rated equilibrium.
  try {
    const Equilibrium eq = operating_equilibrium(1.0, p);
    UnitParams peq = p;
    peq.gamma = eq.gamma;
    peq.mu_0 = eq.mu_0;
    const JacobianMatrix ja = analytic_jacobian(eq, p, JacobianForm::corrected,
                                                DeadbandMode::zero_deadband);
    const JacobianMatrix jn = numeric_jacobian(eq.state, peq, 1e-6, true);
    const auto bad = jacobian_discrepancies(ja, jn, 1e-5);
    std::ostringstream d;
    d << bad.size() << " discrepancies";
    results.push_back({"jacobian_fd", bad.empty(), d.str()});

    const JacobianMatrix jp = analytic_jacobian(eq, p, JacobianForm::as_published);
    const auto flags = jacobian_discrepancies(jp, jn, 1e-5);
    std::ostringstream d2;
    d2 << "flagged entries:";
    bool expected = flags.size() == 3;
    for (const auto& f : flags) {
      d2 << " (" << f.row + 1 << "," << f.col + 1 << ")";
      const bool known = (f.row == 1 && f.col == 8) || (f.row == 2 && f.col == 8) ||
                         (f.row == 8 && f.col == 1);
      if (!known) expected = false;
    }
    results.push_back({"jacobian_published_flags", expected, d2.str()});
  } catch (const Error& e) {
    results.push_back({"jacobian_fd", false, e.what()});
  }

  // 3. Equilibrium residuals across voltages.
  {
    bool ok = true;
    double worst = 0.0;
    int built = 0;
    std::ostringstream d;
    for (double g = 0.5; g <= 1.1001; g += 0.05) {
      try {
        const Equilibrium eq = operating_equilibrium(g, p);
        worst = std::max(worst, eq.residual_norm);
        ++built;
        if (eq.residual_norm >= p.tol.eq_residual) ok = false;
      } catch (const Error& e) {
        d << "gamma=" << g << ": " << e.what() << "; ";
      }
    }
    d << built << " equilibria, worst residual " << worst;
    results.push_back({"equilibrium_residuals", ok && built > 0, d.str()});
  }

  // 4. Integrator order of accuracy on a smooth segment.
  {
    const Equilibrium eq = operating_equilibrium(1.0, p);
    UnitParams peq = p;
    peq.gamma = eq.gamma;
    peq.mu_0 = eq.mu_0;
    // Stator-flux-only perturbation keeps the segment inside the deadband
    // while the truncation error clears the rounding floor.
    State x0 = eq.state;
    x0.psi_d *= 1.0 + 2.5e-4;

    auto terminal = [&](double dt) {
      IntegrationConfig ic;
      ic.dt = dt;
      ic.T_end = 1.0;
      ic.T_discard = 0.0;
      ic.record_stride = static_cast<int>(std::lround(1.0 / dt));
      return integrate(x0, peq, ic).states.back();
    };
    const State a = terminal(1e-3);
    const State b = terminal(5e-4);
    const State ref = terminal(1e-4);
    double ea = 0, eb = 0;
    for (int k = 0; k < kStateDim; ++k) {
      ea += (a[k] - ref[k]) * (a[k] - ref[k]);
      eb += (b[k] - ref[k]) * (b[k] - ref[k]);
    }
    const double ratio = std::sqrt(ea / eb);
    std::ostringstream d;
    d << "error ratio " << ratio << " (expect ~16)";
    results.push_back({"rk4_order", ratio > 12.0 && ratio < 20.0, d.str()});
  }

  bool all = true;
  for (const auto& r : results) {
    all = all && r.pass;
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name;
    if (verbose || !r.pass) std::cout << " — " << r.detail;
    std::cout << "\n";
  }
  std::cout << (all ? "check: all passed\n" : "check: FAILURES\n");
  return all ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hydropower unit stability and transient analysis"};
  app.set_version_flag("--version", kVersion);
  app.fallthrough();  // common options may follow the subcommand

  CommonOpts opts;
  for (int i = 0; i < argc; ++i) opts.argv_copy.push_back(argv[i]);

  app.add_option("--config", opts.config_path, "JSON config file");
  app.add_option("--out", opts.out_dir, "output directory");
  app.add_option("--jobs", opts.jobs, "worker threads for sweeps");
  app.add_option("--seed", opts.seed, "seed for randomized diagnostics");

  std::string grid_spec;
  double gamma = 1.0;
  std::string scenario = "rated";
  bool cold_start = false;
  std::string svg_kind;
  std::string jac_mode = "zero_deadband";
  bool verbose = false;

  auto* c_eq = app.add_subcommand("equilibria", "balance curves and operating points");
  c_eq->add_option("--grid", grid_spec, "gamma grid a:b:n");
  c_eq->add_option("--gamma", gamma, "single voltage ratio");

  auto* c_st = app.add_subcommand("stability", "classify equilibria over a voltage grid");
  c_st->add_option("--grid", grid_spec, "gamma grid a:b:n")->required();
  c_st->add_option("--linearization", jac_mode,
                   "governor linearization: zero_deadband | deadband");

  auto* c_sim = app.add_subcommand("simulate", "transient scenario");
  c_sim->add_option("--scenario", scenario,
                    "rated | reduced_089 | reduced_07 | custom");
  c_sim->add_option("--gamma", gamma, "voltage ratio for custom runs");
  c_sim->add_flag("--cold-start", cold_start,
                  "start the target segment from the built-in initial state");
  c_sim->add_option("--svg", svg_kind, "emit a figure: timeseries | projection3");

  auto* c_amp = app.add_subcommand("amplitude", "oscillation amplitude vs voltage");
  c_amp->add_option("--grid", grid_spec, "beta grid a:b:n");

  auto* c_chk = app.add_subcommand("check", "run the consistency diagnostics");
  c_chk->add_flag("-v,--verbose", verbose, "print details for passing checks too");

  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
    if (c_eq->parsed()) return cmd_equilibria(opts, grid_spec, gamma);
    if (c_st->parsed()) return cmd_stability(opts, grid_spec, jac_mode);
    if (c_sim->parsed()) return cmd_simulate(opts, scenario, gamma, cold_start, svg_kind);
    if (c_amp->parsed()) return cmd_amplitude(opts, grid_spec);
    if (c_chk->parsed()) return cmd_check(opts, verbose);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const ParameterError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
