#pragma once

#include <string>
#include <vector>

namespace hydro::io {

/// One named data series for plotting.
struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Line plot with axes, ticks and a legend; writes a standalone SVG file.
void svg_plot(const std::string& path, const std::string& title,
              const std::string& x_label, const std::string& y_label,
              const std::vector<Series>& series, int width = 900, int height = 520);

/// Oblique projection of a 3-variable trajectory onto the drawing plane.
/// Axes are normalized independently before projecting.
void svg_projection3(const std::string& path, const std::string& title,
                     const std::vector<double>& x, const std::vector<double>& y,
                     const std::vector<double>& z, const std::string& x_label,
                     const std::string& y_label, const std::string& z_label,
                     int width = 720, int height = 640);

/// Amplitude-vs-voltage band: stem markers per grid point, colored by
/// regime kind ("equilibrium", "limit_cycle", "unresolved").
void svg_sweep_band(const std::string& path, const std::string& title,
                    const std::vector<double>& beta,
                    const std::vector<double>& amplitude,
                    const std::vector<std::string>& kinds, int width = 900,
                    int height = 520);

}  // namespace hydro::io
