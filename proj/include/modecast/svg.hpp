#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

// Static SVG line charts. Deterministic by construction: fixed canvas,
// fixed-precision coordinates, no timestamps — identical inputs give
// byte-identical files.

namespace modecast {

struct ChartSeries {
  std::string label;
  std::string color;  // CSS color for the polyline stroke
  std::vector<double> values;
};

namespace detail {

inline std::string xml_escape(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
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

inline std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string tick_label(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace detail

/// Polyline chart of one or more equally long series against their sample
/// index, with axes, tick labels, and a legend.
inline std::string line_chart_svg(const std::string& title, const std::string& x_label,
                                  const std::string& y_label, const std::vector<ChartSeries>& series) {
  if (series.empty()) throw std::invalid_argument("line_chart_svg: no series");
  const std::size_t n = series[0].values.size();
  if (n < 2) throw std::invalid_argument("line_chart_svg: need at least two points");
  for (const auto& s : series)
    if (s.values.size() != n) throw std::invalid_argument("line_chart_svg: series length mismatch");

  double lo = series[0].values[0];
  double hi = lo;
  for (const auto& s : series)
    for (double v : s.values) {
      if (!std::isfinite(v)) throw std::invalid_argument("line_chart_svg: non-finite value");
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  const double pad = (hi > lo) ? 0.05 * (hi - lo) : 1.0;
  lo -= pad;
  hi += pad;

  const double width = 960.0, height = 480.0;
  const double left = 70.0, right = 20.0, top = 44.0, bottom = 52.0;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  const auto x_of = [&](std::size_t i) {
    return left + plot_w * static_cast<double>(i) / static_cast<double>(n - 1);
  };
  const auto y_of = [&](double v) { return top + plot_h * (1.0 - (v - lo) / (hi - lo)); };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"960\" height=\"480\" "
         "viewBox=\"0 0 960 480\" font-family=\"sans-serif\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"960\" height=\"480\" fill=\"white\"/>\n";
  svg += "<text x=\"480\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" +
         detail::xml_escape(title) + "</text>\n";

  // gridlines and y ticks
  const int tick_count = 5;
  for (int t = 0; t < tick_count; ++t) {
    const double v = lo + (hi - lo) * static_cast<double>(t) / (tick_count - 1);
    const std::string y = detail::fixed2(y_of(v));
    svg += "<line x1=\"" + detail::fixed2(left) + "\" y1=\"" + y + "\" x2=\"" +
           detail::fixed2(left + plot_w) + "\" y2=\"" + y + "\" stroke=\"#dddddd\"/>\n";
    svg += "<text x=\"" + detail::fixed2(left - 8.0) + "\" y=\"" + y +
           "\" text-anchor=\"end\" dominant-baseline=\"middle\" font-size=\"11\">" +
           detail::tick_label(v) + "</text>\n";
  }
  // x ticks
  for (int t = 0; t < tick_count; ++t) {
    const auto i = static_cast<std::size_t>(
        std::llround(static_cast<double>(n - 1) * static_cast<double>(t) / (tick_count - 1)));
    const std::string x = detail::fixed2(x_of(i));
    svg += "<line x1=\"" + x + "\" y1=\"" + detail::fixed2(top + plot_h) + "\" x2=\"" + x + "\" y2=\"" +
           detail::fixed2(top + plot_h + 5.0) + "\" stroke=\"#333333\"/>\n";
    svg += "<text x=\"" + x + "\" y=\"" + detail::fixed2(top + plot_h + 18.0) +
           "\" text-anchor=\"middle\" font-size=\"11\">" + std::to_string(i) + "</text>\n";
  }

  // frame
  svg += "<rect x=\"" + detail::fixed2(left) + "\" y=\"" + detail::fixed2(top) + "\" width=\"" +
         detail::fixed2(plot_w) + "\" height=\"" + detail::fixed2(plot_h) +
         "\" fill=\"none\" stroke=\"#333333\"/>\n";

  // series
  for (const auto& s : series) {
    svg += "<polyline fill=\"none\" stroke=\"" + detail::xml_escape(s.color) +
           "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < n; ++i) {
      if (i) svg += ' ';
      svg += detail::fixed2(x_of(i)) + ',' + detail::fixed2(y_of(s.values[i]));
    }
    svg += "\"/>\n";
  }

  // legend, top-right inside the frame
  double legend_y = top + 16.0;
  for (const auto& s : series) {
    const double lx = left + plot_w - 150.0;
    svg += "<line x1=\"" + detail::fixed2(lx) + "\" y1=\"" + detail::fixed2(legend_y - 4.0) + "\" x2=\"" +
           detail::fixed2(lx + 24.0) + "\" y2=\"" + detail::fixed2(legend_y - 4.0) + "\" stroke=\"" +
           detail::xml_escape(s.color) + "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + detail::fixed2(lx + 30.0) + "\" y=\"" + detail::fixed2(legend_y) +
           "\" font-size=\"12\">" + detail::xml_escape(s.label) + "</text>\n";
    legend_y += 18.0;
  }

  // axis labels
  svg += "<text x=\"" + detail::fixed2(left + plot_w / 2.0) + "\" y=\"" + detail::fixed2(height - 12.0) +
         "\" text-anchor=\"middle\" font-size=\"13\">" + detail::xml_escape(x_label) + "</text>\n";
  svg += "<text x=\"16\" y=\"" + detail::fixed2(top + plot_h / 2.0) +
         "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 " +
         detail::fixed2(top + plot_h / 2.0) + ")\">" + detail::xml_escape(y_label) + "</text>\n";

  svg += "</svg>\n";
  return svg;
}

}  // namespace modecast
