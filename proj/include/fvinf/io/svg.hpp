#pragma once

// Minimal static SVG line plots. Pure projections of the data handed in.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace fvinf::io {

struct Marker {
  double x, y;
  std::string label;
};

struct Panel {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<double> x;
  std::vector<double> y;
  /// Plot log10(y); non-positive samples are dropped.
  bool log_y = false;
  std::vector<Marker> markers;
};

namespace detail {

inline std::string fmt(double v, const char* spec = "%.2f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string render_panel(const Panel& p, double ox, double oy, double w, double h) {
  constexpr double ml = 70, mr = 15, mt = 28, mb = 42;
  const double pw = w - ml - mr, ph = h - mt - mb;

  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < std::min(p.x.size(), p.y.size()); ++i) {
    double y = p.y[i];
    if (p.log_y) {
      if (!(y > 0)) continue;
      y = std::log10(y);
    }
    if (!std::isfinite(y) || !std::isfinite(p.x[i])) continue;
    xs.push_back(p.x[i]);
    ys.push_back(y);
  }
  std::vector<Marker> marks;
  for (auto m : p.markers) {
    if (p.log_y) {
      if (!(m.y > 0)) continue;
      m.y = std::log10(m.y);
    }
    marks.push_back(m);
  }

  std::string s;
  s += "<g transform=\"translate(" + fmt(ox) + "," + fmt(oy) + ")\">\n";
  s += "<text x=\"" + fmt(w / 2) + "\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">" + escape(p.title) + "</text>\n";
  s += "<rect x=\"" + fmt(ml) + "\" y=\"" + fmt(mt) + "\" width=\"" + fmt(pw) + "\" height=\"" + fmt(ph) +
       "\" fill=\"none\" stroke=\"#444\"/>\n";
  if (xs.empty()) {
    s += "<text x=\"" + fmt(ml + pw / 2) + "\" y=\"" + fmt(mt + ph / 2) + "\" text-anchor=\"middle\">no data</text>\n</g>\n";
    return s;
  }
  double x0 = *std::min_element(xs.begin(), xs.end()), x1 = *std::max_element(xs.begin(), xs.end());
  double y0 = *std::min_element(ys.begin(), ys.end()), y1 = *std::max_element(ys.begin(), ys.end());
  for (const auto& m : marks) {
    y0 = std::min(y0, m.y);
    y1 = std::max(y1, m.y);
  }
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) {
    y0 -= 0.5 * (std::abs(y0) + 1);
    y1 += 0.5 * (std::abs(y1) + 1);
  }
  auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return mt + ph - (y - y0) / (y1 - y0) * ph; };

  // Thin very long series to at most ~2000 vertices.
  const std::size_t step = std::max<std::size_t>(1, xs.size() / 2000);
  s += "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < xs.size(); i += step) s += fmt(px(xs[i])) + "," + fmt(py(ys[i])) + " ";
  s += fmt(px(xs.back())) + "," + fmt(py(ys.back()));
  s += "\"/>\n";
  for (const auto& m : marks) {
    s += "<circle cx=\"" + fmt(px(m.x)) + "\" cy=\"" + fmt(py(m.y)) + "\" r=\"4\" fill=\"#d62728\"/>\n";
    s += "<text x=\"" + fmt(px(m.x) + 6) + "\" y=\"" + fmt(py(m.y) - 6) + "\" font-size=\"11\">" + escape(m.label) + "</text>\n";
  }
  const char* tick = "%.4g";
  s += "<text x=\"" + fmt(ml) + "\" y=\"" + fmt(mt + ph + 16) + "\" font-size=\"10\">" + fmt(x0, tick) + "</text>\n";
  s += "<text x=\"" + fmt(ml + pw) + "\" y=\"" + fmt(mt + ph + 16) + "\" font-size=\"10\" text-anchor=\"end\">" + fmt(x1, tick) + "</text>\n";
  s += "<text x=\"" + fmt(ml - 4) + "\" y=\"" + fmt(mt + ph) + "\" font-size=\"10\" text-anchor=\"end\">" + fmt(y0, tick) + "</text>\n";
  s += "<text x=\"" + fmt(ml - 4) + "\" y=\"" + fmt(mt + 10) + "\" font-size=\"10\" text-anchor=\"end\">" + fmt(y1, tick) + "</text>\n";
  s += "<text x=\"" + fmt(ml + pw / 2) + "\" y=\"" + fmt(h - 8) + "\" text-anchor=\"middle\" font-size=\"12\">" + escape(p.x_label) + "</text>\n";
  const std::string ylab = p.log_y ? "log10 " + p.y_label : p.y_label;
  s += "<text transform=\"translate(14," + fmt(mt + ph / 2) + ") rotate(-90)\" text-anchor=\"middle\" font-size=\"12\">" +
       escape(ylab) + "</text>\n";
  s += "</g>\n";
  return s;
}

}  // namespace detail

inline std::string render_svg(const std::vector<Panel>& panels, int columns = 1, double panel_w = 520,
                              double panel_h = 300) {
  columns = std::max(1, columns);
  const int rows = static_cast<int>((panels.size() + columns - 1) / columns);
  const double W = panel_w * columns, H = panel_h * std::max(rows, 1);
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::fmt(W, "%.0f") + "\" height=\"" +
                  detail::fmt(H, "%.0f") + "\" font-family=\"sans-serif\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t i = 0; i < panels.size(); ++i) {
    const int r = static_cast<int>(i) / columns, c = static_cast<int>(i) % columns;
    s += detail::render_panel(panels[i], c * panel_w, r * panel_h, panel_w, panel_h);
  }
  s += "</svg>\n";
  return s;
}

}  // namespace fvinf::io
