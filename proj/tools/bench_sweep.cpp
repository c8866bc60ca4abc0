// Benchmark of the OpenMP sweep kernels against the serial reference
// implementation. Both paths produce bitwise-identical results; this tool
// reports wall time and verifies that equality on real workloads.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "hydro/equilibria.hpp"
#include "hydro/parallel.hpp"
#include "hydro/params.hpp"
#include "hydro/stability.hpp"
#include "hydro/transient.hpp"

using namespace hydro;
using clock_type = std::chrono::steady_clock;

namespace {

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

template <class Fn>
double timed(Fn&& fn) {
  const auto t0 = clock_type::now();
  fn();
  return seconds_since(t0);
}

}  // namespace

int main(int argc, char** argv) {
  const int jobs = argc > 1 ? std::atoi(argv[1]) : hardware_jobs();
  const UnitParams p = sayano_defaults();

  std::printf("bench: serial reference vs OpenMP (%d jobs)\n\n", jobs);
  std::printf("%-24s %12s %12s %9s %s\n", "kernel", "serial [s]", "parallel [s]",
              "speedup", "identical");

  {
    std::vector<double> grid;
    for (double g = 0.60; g <= 1.10001; g += 0.01) grid.push_back(g);
    BalanceCurve serial_out, parallel_out;
    const double ts = timed([&] { serial_out = balance_curves(grid, p, 1); });
    const double tp = timed([&] { parallel_out = balance_curves(grid, p, jobs); });
    bool same = true;
    for (size_t i = 0; i < grid.size(); ++i) {
      same = same && serial_out.mu0_values[i] == parallel_out.mu0_values[i] &&
             serial_out.power_values[i] == parallel_out.power_values[i];
    }
    std::printf("%-24s %12.3f %12.3f %8.2fx %s\n", "balance_curves", ts, tp,
                ts / tp, same ? "yes" : "NO");
  }

  {
    std::vector<double> grid;
    for (double g = 0.60; g <= 1.10001; g += 0.01) grid.push_back(g);
    SweepResult serial_out, parallel_out;
    const double ts = timed([&] { serial_out = stability_sweep(grid, p, 1); });
    const double tp = timed([&] { parallel_out = stability_sweep(grid, p, jobs); });
    bool same = serial_out.points.size() == parallel_out.points.size();
    for (size_t i = 0; same && i < serial_out.points.size(); ++i) {
      const auto& a = serial_out.points[i];
      const auto& b = parallel_out.points[i];
      same = a.branches.size() == b.branches.size();
      for (size_t k = 0; same && k < a.branches.size(); ++k) {
        same = a.branches[k].eig.margin == b.branches[k].eig.margin &&
               a.branches[k].rh.margin == b.branches[k].rh.margin;
      }
    }
    std::printf("%-24s %12.3f %12.3f %8.2fx %s\n", "stability_sweep", ts, tp,
                ts / tp, same ? "yes" : "NO");
  }

  {
    IntegrationConfig cfg;
    cfg.T_end = 120.0;
    cfg.T_discard = 60.0;
    RegimeTolerances tols;
    std::vector<double> grid;
    for (double b = 0.82; b <= 0.9601; b += 0.02) grid.push_back(b);
    std::vector<AmplitudePoint> serial_out, parallel_out;
    const double ts =
        timed([&] { serial_out = amplitude_sweep(grid, p, cfg, tols, 1); });
    const double tp =
        timed([&] { parallel_out = amplitude_sweep(grid, p, cfg, tols, jobs); });
    bool same = serial_out.size() == parallel_out.size();
    for (size_t i = 0; same && i < serial_out.size(); ++i) {
      same = serial_out[i].amplitude_s == parallel_out[i].amplitude_s &&
             serial_out[i].kind == parallel_out[i].kind;
    }
    std::printf("%-24s %12.3f %12.3f %8.2fx %s\n", "amplitude_sweep (120 s)", ts,
                tp, ts / tp, same ? "yes" : "NO");
  }

  return 0;
}
