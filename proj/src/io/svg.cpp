#include "hydro/io/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "hydro/errors.hpp"

namespace hydro::io {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#17becf", "#7f7f7f",
                          "#bcbd22"};

std::string esc(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  void pad() {
    if (!(lo <= hi)) {
      lo = 0.0;
      hi = 1.0;
    }
    if (lo == hi) {
      lo -= 0.5;
      hi += 0.5;
    } else {
      const double m = 0.04 * (hi - lo);
      lo -= m;
      hi += m;
    }
  }
  double t(double v) const { return (v - lo) / (hi - lo); }
};

struct Frame {
  double x0, y0, w, h;  // plot box in svg coordinates (y grows downward)
  Range rx, ry;
  double px(double v) const { return x0 + rx.t(v) * w; }
  double py(double v) const { return y0 + h - ry.t(v) * h; }
};

void axes(std::ostream& os, const Frame& f, const std::string& x_label,
          const std::string& y_label, const std::string& title) {
  os << "<rect x=\"" << num(f.x0) << "\" y=\"" << num(f.y0) << "\" width=\""
     << num(f.w) << "\" height=\"" << num(f.h)
     << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  const int n_ticks = 6;
  for (int i = 0; i <= n_ticks; ++i) {
    const double fx = f.rx.lo + (f.rx.hi - f.rx.lo) * i / n_ticks;
    const double fy = f.ry.lo + (f.ry.hi - f.ry.lo) * i / n_ticks;
    const double x = f.px(fx);
    const double y = f.py(fy);
    os << "<line x1=\"" << num(x) << "\" y1=\"" << num(f.y0 + f.h) << "\" x2=\""
       << num(x) << "\" y2=\"" << num(f.y0 + f.h + 5)
       << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    os << "<text x=\"" << num(x) << "\" y=\"" << num(f.y0 + f.h + 18)
       << "\" font-size=\"11\" text-anchor=\"middle\" fill=\"#333333\">"
       << esc(num(fx)) << "</text>\n";
    os << "<line x1=\"" << num(f.x0 - 5) << "\" y1=\"" << num(y) << "\" x2=\""
       << num(f.x0) << "\" y2=\"" << num(y)
       << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    os << "<text x=\"" << num(f.x0 - 8) << "\" y=\"" << num(y + 4)
       << "\" font-size=\"11\" text-anchor=\"end\" fill=\"#333333\">" << esc(num(fy))
       << "</text>\n";
  }
  os << "<text x=\"" << num(f.x0 + f.w / 2) << "\" y=\"" << num(f.y0 + f.h + 36)
     << "\" font-size=\"13\" text-anchor=\"middle\" fill=\"#111111\">" << esc(x_label)
     << "</text>\n";
  os << "<text x=\"16\" y=\"" << num(f.y0 + f.h / 2)
     << "\" font-size=\"13\" text-anchor=\"middle\" fill=\"#111111\" transform=\"rotate(-90 16 "
     << num(f.y0 + f.h / 2) << ")\">" << esc(y_label) << "</text>\n";
  os << "<text x=\"" << num(f.x0 + f.w / 2) << "\" y=\"22"
     << "\" font-size=\"15\" text-anchor=\"middle\" fill=\"#111111\">" << esc(title)
     << "</text>\n";
}

void polyline(std::ostream& os, const Frame& f, const std::vector<double>& x,
              const std::vector<double>& y, const char* color) {
  os << "<polyline fill=\"none\" stroke=\"" << color
     << "\" stroke-width=\"1.2\" points=\"";
  const size_t n = std::min(x.size(), y.size());
  // Cap emitted points so long trajectories stay viewable.
  const size_t max_pts = 20000;
  const size_t stride = n > max_pts ? (n + max_pts - 1) / max_pts : 1;
  for (size_t i = 0; i < n; i += stride) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) continue;
    os << num(f.px(x[i])) << "," << num(f.py(y[i])) << " ";
  }
  os << "\"/>\n";
}

std::ofstream open_svg(const std::string& path, int width, int height) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("svg: cannot open " + path);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height
      << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  return out;
}

}  // namespace

void svg_plot(const std::string& path, const std::string& title,
              const std::string& x_label, const std::string& y_label,
              const std::vector<Series>& series, int width, int height) {
  std::ofstream out = open_svg(path, width, height);
  Frame f{64, 34, width - 96.0, height - 96.0, {}, {}};
  for (const auto& s : series) {
    for (double v : s.x) f.rx.add(v);
    for (double v : s.y) f.ry.add(v);
  }
  f.rx.pad();
  f.ry.pad();
  axes(out, f, x_label, y_label, title);
  int ci = 0;
  for (const auto& s : series) {
    const char* color = kPalette[ci % 9];
    polyline(out, f, s.x, s.y, color);
    out << "<text x=\"" << num(f.x0 + f.w - 6) << "\" y=\""
        << num(f.y0 + 16 + 16 * ci) << "\" font-size=\"12\" text-anchor=\"end\" fill=\""
        << color << "\">" << esc(s.label) << "</text>\n";
    ++ci;
  }
  out << "</svg>\n";
  if (!out) throw Error("svg: write failure on " + path);
}

void svg_projection3(const std::string& path, const std::string& title,
                     const std::vector<double>& x, const std::vector<double>& y,
                     const std::vector<double>& z, const std::string& x_label,
                     const std::string& y_label, const std::string& z_label,
                     int width, int height) {
  std::ofstream out = open_svg(path, width, height);

  Range rx, ry, rz;
  for (double v : x) rx.add(v);
  for (double v : y) ry.add(v);
  for (double v : z) rz.add(v);
  rx.pad();
  ry.pad();
  rz.pad();

  // Oblique cabinet projection of the normalized unit cube.
  const double ca = 0.5 * std::cos(M_PI / 6.0);
  const double sa = 0.5 * std::sin(M_PI / 6.0);
  const double box = std::min(width, height) - 170.0;
  const double ox = 70.0, oy = height - 90.0;
  auto proj = [&](double nx, double ny, double nz, double& px, double& py) {
    px = ox + (nx + ca * nz) * box;
    py = oy - (ny + sa * nz) * box;
  };

  auto edge = [&](double x1, double y1, double z1, double x2, double y2, double z2) {
    double ax, ay, bx, by;
    proj(x1, y1, z1, ax, ay);
    proj(x2, y2, z2, bx, by);
    out << "<line x1=\"" << num(ax) << "\" y1=\"" << num(ay) << "\" x2=\"" << num(bx)
        << "\" y2=\"" << num(by) << "\" stroke=\"#999999\" stroke-width=\"1\"/>\n";
  };
  edge(0, 0, 0, 1, 0, 0);
  edge(0, 0, 0, 0, 1, 0);
  edge(0, 0, 0, 0, 0, 1);

  auto axis_text = [&](double nx, double ny, double nz, const std::string& label) {
    double px, py;
    proj(nx, ny, nz, px, py);
    out << "<text x=\"" << num(px) << "\" y=\"" << num(py)
        << "\" font-size=\"13\" fill=\"#111111\">" << esc(label) << "</text>\n";
  };
  axis_text(1.04, 0, 0, x_label);
  axis_text(0, 1.04, 0, y_label);
  axis_text(0, 0, 1.08, z_label);

  out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1\" points=\"";
  const size_t n = std::min({x.size(), y.size(), z.size()});
  const size_t max_pts = 30000;
  const size_t stride = n > max_pts ? (n + max_pts - 1) / max_pts : 1;
  for (size_t i = 0; i < n; i += stride) {
    double px, py;
    proj(rx.t(x[i]), ry.t(y[i]), rz.t(z[i]), px, py);
    out << num(px) << "," << num(py) << " ";
  }
  out << "\"/>\n";
  out << "<text x=\"" << num(width / 2.0)
      << "\" y=\"24\" font-size=\"15\" text-anchor=\"middle\" fill=\"#111111\">"
      << esc(title) << "</text>\n";
  out << "</svg>\n";
  if (!out) throw Error("svg: write failure on " + path);
}

void svg_sweep_band(const std::string& path, const std::string& title,
                    const std::vector<double>& beta,
                    const std::vector<double>& amplitude,
                    const std::vector<std::string>& kinds, int width, int height) {
  std::ofstream out = open_svg(path, width, height);
  Frame f{64, 34, width - 96.0, height - 96.0, {}, {}};
  for (double v : beta) f.rx.add(v);
  f.ry.add(0.0);
  for (double v : amplitude) f.ry.add(v);
  f.rx.pad();
  f.ry.pad();
  axes(out, f, "beta = U/U_nom", "s amplitude (peak-to-peak)", title);

  const double y0 = f.py(0.0);
  for (size_t i = 0; i < beta.size(); ++i) {
    const std::string kind = i < kinds.size() ? kinds[i] : "unresolved";
    const char* color = kind == "limit_cycle" ? "#d62728"
                        : kind == "equilibrium" ? "#1f77b4"
                                                : "#7f7f7f";
    const double px = f.px(beta[i]);
    const double py = f.py(std::isfinite(amplitude[i]) ? amplitude[i] : 0.0);
    out << "<line x1=\"" << num(px) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(px)
        << "\" y2=\"" << num(py) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    out << "<circle cx=\"" << num(px) << "\" cy=\"" << num(py)
        << "\" r=\"3.5\" fill=\"" << color << "\"/>\n";
  }
  out << "</svg>\n";
  if (!out) throw Error("svg: write failure on " + path);
}

}  // namespace hydro::io
