#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "csit/scenario.hpp"

namespace csit::svg {

enum class Metric { throughput, pout };

namespace detail {

inline constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                           "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

inline std::string fmt_coord(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

// Round tick step to a 1/2/5 decade.
inline double nice_step(double span, int target_ticks) {
  const double raw = span / target_ticks;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double r = raw / mag;
  if (r < 1.5) return mag;
  if (r < 3.5) return 2.0 * mag;
  if (r < 7.5) return 5.0 * mag;
  return 10.0 * mag;
}

}  // namespace detail

// Renders a sweep as a standalone SVG line chart: one polyline per scheme,
// linear axes with numeric tick labels, legend in the top-right. The output
// is a pure function of the input rows, hence byte-identical across runs.
inline std::string render(const scenario::SweepResult& result, const std::string& axis_label,
                          Metric metric = Metric::throughput) {
  if (result.rows.empty()) throw std::invalid_argument("svg::render: empty sweep result");

  const bool use_tput = metric == Metric::throughput;
  std::map<std::string, std::vector<std::pair<double, double>>> series;
  double x_min = 1e300, x_max = -1e300, y_min = 1e300, y_max = -1e300;
  for (const auto& row : result.rows) {
    double y;
    if (use_tput) {
      if (!row.throughput_mnats) continue;
      y = *row.throughput_mnats;
    } else {
      y = row.pout;
    }
    series[row.scheme].emplace_back(row.axis_value, y);
    x_min = std::min(x_min, row.axis_value);
    x_max = std::max(x_max, row.axis_value);
    y_min = std::min(y_min, y);
    y_max = std::max(y_max, y);
  }
  if (series.empty())
    throw std::invalid_argument("svg::render: no rows carry the requested metric");
  if (x_max <= x_min) x_max = x_min + 1.0;
  if (y_max <= y_min) y_max = y_min + 1.0;
  y_min = std::min(0.0, y_min);
  y_max *= 1.05;

  constexpr double kW = 800.0, kH = 520.0;
  constexpr double kL = 70.0, kR = 20.0, kT = 20.0, kB = 50.0;
  const double plot_w = kW - kL - kR;
  const double plot_h = kH - kT - kB;
  const auto sx = [&](double x) { return kL + (x - x_min) / (x_max - x_min) * plot_w; };
  const auto sy = [&](double y) { return kT + plot_h - (y - y_min) / (y_max - y_min) * plot_h; };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"520\" "
         "viewBox=\"0 0 800 520\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"520\" fill=\"white\"/>\n";

  // axes
  out += "<line x1=\"" + detail::fmt_coord(kL) + "\" y1=\"" + detail::fmt_coord(kT + plot_h) +
         "\" x2=\"" + detail::fmt_coord(kL + plot_w) + "\" y2=\"" +
         detail::fmt_coord(kT + plot_h) + "\" stroke=\"black\"/>\n";
  out += "<line x1=\"" + detail::fmt_coord(kL) + "\" y1=\"" + detail::fmt_coord(kT) + "\" x2=\"" +
         detail::fmt_coord(kL) + "\" y2=\"" + detail::fmt_coord(kT + plot_h) +
         "\" stroke=\"black\"/>\n";

  const double x_step = detail::nice_step(x_max - x_min, 8);
  for (double t = std::ceil(x_min / x_step) * x_step; t <= x_max + 1e-9 * x_step; t += x_step) {
    const double px = sx(t);
    out += "<line x1=\"" + detail::fmt_coord(px) + "\" y1=\"" + detail::fmt_coord(kT + plot_h) +
           "\" x2=\"" + detail::fmt_coord(px) + "\" y2=\"" + detail::fmt_coord(kT + plot_h + 5) +
           "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + detail::fmt_coord(px) + "\" y=\"" + detail::fmt_coord(kT + plot_h + 20) +
           "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">" +
           detail::fmt(t) + "</text>\n";
  }
  const double y_step = detail::nice_step(y_max - y_min, 8);
  for (double t = std::ceil(y_min / y_step) * y_step; t <= y_max + 1e-9 * y_step; t += y_step) {
    const double py = sy(t);
    out += "<line x1=\"" + detail::fmt_coord(kL - 5) + "\" y1=\"" + detail::fmt_coord(py) +
           "\" x2=\"" + detail::fmt_coord(kL) + "\" y2=\"" + detail::fmt_coord(py) +
           "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + detail::fmt_coord(kL - 8) + "\" y=\"" + detail::fmt_coord(py + 4) +
           "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">" +
           detail::fmt(t) + "</text>\n";
  }

  out += "<text x=\"" + detail::fmt_coord(kL + plot_w / 2) + "\" y=\"" +
         detail::fmt_coord(kH - 10) +
         "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">" + axis_label +
         "</text>\n";
  const std::string y_label = use_tput ? "throughput [Mnats/s]" : "outage probability";
  out += "<text x=\"18\" y=\"" + detail::fmt_coord(kT + plot_h / 2) +
         "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 18 " +
         detail::fmt_coord(kT + plot_h / 2) + ")\">" + y_label + "</text>\n";

  std::size_t color_idx = 0;
  std::vector<std::pair<std::string, std::string>> legend;
  for (const auto& [label, points] : series) {
    const std::string color = detail::kPalette[color_idx % 8];
    ++color_idx;
    legend.emplace_back(label, color);
    std::string poly = "<polyline fill=\"none\" stroke=\"" + color +
                       "\" stroke-width=\"2\" points=\"";
    for (const auto& [x, y] : points) {
      poly += detail::fmt_coord(sx(x)) + "," + detail::fmt_coord(sy(y)) + " ";
    }
    poly += "\"/>\n";
    out += poly;
  }

  double ly = kT + 16.0;
  for (const auto& [label, color] : legend) {
    out += "<line x1=\"" + detail::fmt_coord(kL + plot_w - 170) + "\" y1=\"" +
           detail::fmt_coord(ly - 4) + "\" x2=\"" + detail::fmt_coord(kL + plot_w - 140) +
           "\" y2=\"" + detail::fmt_coord(ly - 4) + "\" stroke=\"" + color +
           "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + detail::fmt_coord(kL + plot_w - 132) + "\" y=\"" +
           detail::fmt_coord(ly) + "\" font-family=\"sans-serif\" font-size=\"12\">" + label +
           "</text>\n";
    ly += 18.0;
  }

  out += "</svg>\n";
  return out;
}

// Writes the rendered chart to a file.
inline void emit_svg(const scenario::SweepResult& result, const std::string& axis_label,
                     const std::string& path, Metric metric = Metric::throughput) {
  const std::string body = render(result, axis_label, metric);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit_svg: cannot open " + path);
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!out) throw std::runtime_error("emit_svg: write failed for " + path);
}

}  // namespace csit::svg
