// Copyright 2026 The gpuscale Authors
// SPDX-License-Identifier: Apache-2.0
//
// Log-log SVG plot of epoch time versus GPU count with fitted power laws.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "gpuscale/curve_io.hpp"
#include "gpuscale/error.hpp"
#include "gpuscale/scaling.hpp"

namespace gpuscale {

/// Maps data coordinates to SVG pixels. Axis ranges snap outwards to decades.
struct LogLogFrame {
  double width = 800, height = 560;
  double left = 80, right = 190, top = 30, bottom = 60;
  double x_lo = 0, x_hi = 1;  // log10 bounds
  double y_lo = 0, y_hi = 1;

  double px(double n) const {
    return left + (std::log10(n) - x_lo) / (x_hi - x_lo) * (width - left - right);
  }
  double py(double t) const {
    return top + (y_hi - std::log10(t)) / (y_hi - y_lo) * (height - top - bottom);
  }
};

inline LogLogFrame make_frame(const std::vector<ScalingCurve>& curves,
                              const std::vector<PowerLawFit>& fits) {
  double nmin = std::numeric_limits<double>::infinity(), nmax = 0;
  double tmin = std::numeric_limits<double>::infinity(), tmax = 0;
  for (const auto& c : curves)
    for (const auto& p : c.points) {
      nmin = std::min(nmin, static_cast<double>(p.n_gpus));
      nmax = std::max(nmax, static_cast<double>(p.n_gpus));
      tmin = std::min(tmin, p.epoch_time);
      tmax = std::max(tmax, p.epoch_time);
    }
  for (const auto& f : fits) {
    for (double n : {nmin, nmax}) {
      const double t = f.predict(n);
      if (std::isfinite(t) && t > 0) {
        tmin = std::min(tmin, t);
        tmax = std::max(tmax, t);
      }
    }
  }
  LogLogFrame fr;
  fr.x_lo = std::floor(std::log10(nmin));
  fr.x_hi = std::max(std::ceil(std::log10(nmax)), fr.x_lo + 1);
  fr.y_lo = std::floor(std::log10(tmin));
  fr.y_hi = std::max(std::ceil(std::log10(tmax)), fr.y_lo + 1);
  return fr;
}

namespace detail {

inline std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
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

inline std::string decade_label(int e) {
  if (e >= 0 && e <= 4) return std::to_string(static_cast<long long>(std::pow(10.0, e)));
  return "1e" + std::to_string(e);
}

inline const char* series_color(std::size_t i) {
  static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                  "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  return palette[i % (sizeof palette / sizeof palette[0])];
}

}  // namespace detail

/// `fits` pairs with `curves` by index; it may be shorter (curves without a line).
inline std::string render_plot_svg(const std::vector<ScalingCurve>& curves,
                                   const std::vector<PowerLawFit>& fits) {
  using detail::fmt2;
  if (curves.empty()) throw validation_error("emit_plot: no curves to plot");
  if (fits.size() > curves.size())
    throw validation_error("emit_plot: " + std::to_string(fits.size()) + " fits for " +
                           std::to_string(curves.size()) + " curves");
  for (const auto& c : curves) validate(c);

  const LogLogFrame fr = make_frame(curves, fits);
  const double x0 = fr.left, x1 = fr.width - fr.right;
  const double y0 = fr.top, y1 = fr.height - fr.bottom;

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt2(fr.width) + "\" height=\"" +
       fmt2(fr.height) + "\" viewBox=\"0 0 " + fmt2(fr.width) + " " + fmt2(fr.height) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // Decade grid and tick labels.
  s += "<g class=\"grid\" stroke=\"#dddddd\" stroke-width=\"1\">\n";
  for (int e = static_cast<int>(fr.x_lo); e <= static_cast<int>(fr.x_hi); ++e) {
    const double x = fr.px(std::pow(10.0, e));
    s += "<line x1=\"" + fmt2(x) + "\" y1=\"" + fmt2(y0) + "\" x2=\"" + fmt2(x) + "\" y2=\"" +
         fmt2(y1) + "\"/>\n";
  }
  for (int e = static_cast<int>(fr.y_lo); e <= static_cast<int>(fr.y_hi); ++e) {
    const double y = fr.py(std::pow(10.0, e));
    s += "<line x1=\"" + fmt2(x0) + "\" y1=\"" + fmt2(y) + "\" x2=\"" + fmt2(x1) + "\" y2=\"" +
         fmt2(y) + "\"/>\n";
  }
  s += "</g>\n";
  s += "<g class=\"ticks\" font-family=\"sans-serif\" font-size=\"12\" fill=\"black\">\n";
  for (int e = static_cast<int>(fr.x_lo); e <= static_cast<int>(fr.x_hi); ++e)
    s += "<text x=\"" + fmt2(fr.px(std::pow(10.0, e))) + "\" y=\"" + fmt2(y1 + 18) +
         "\" text-anchor=\"middle\">" + detail::decade_label(e) + "</text>\n";
  for (int e = static_cast<int>(fr.y_lo); e <= static_cast<int>(fr.y_hi); ++e)
    s += "<text x=\"" + fmt2(x0 - 8) + "\" y=\"" + fmt2(fr.py(std::pow(10.0, e)) + 4) +
         "\" text-anchor=\"end\">" + detail::decade_label(e) + "</text>\n";
  s += "</g>\n";

  s += "<rect class=\"axes\" x=\"" + fmt2(x0) + "\" y=\"" + fmt2(y0) + "\" width=\"" +
       fmt2(x1 - x0) + "\" height=\"" + fmt2(y1 - y0) +
       "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  s += "<text class=\"xlabel\" x=\"" + fmt2((x0 + x1) / 2) + "\" y=\"" + fmt2(fr.height - 15) +
       "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">Number of GPUs</text>\n";
  s += "<text class=\"ylabel\" x=\"20\" y=\"" + fmt2((y0 + y1) / 2) +
       "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 20 " +
       fmt2((y0 + y1) / 2) + ")\">Training time per epoch (s)</text>\n";

  for (std::size_t i = 0; i < curves.size(); ++i) {
    const auto& c = curves[i];
    const char* color = detail::series_color(i);
    s += "<g class=\"series\" data-label=\"" + detail::xml_escape(c.label) + "\" fill=\"" + color +
         "\" stroke=\"" + color + "\">\n";
    if (i < fits.size()) {
      const double na = static_cast<double>(c.points.front().n_gpus);
      const double nb = static_cast<double>(c.points.back().n_gpus);
      s += "<line class=\"fit\" x1=\"" + fmt2(fr.px(na)) + "\" y1=\"" + fmt2(fr.py(fits[i].predict(na))) +
           "\" x2=\"" + fmt2(fr.px(nb)) + "\" y2=\"" + fmt2(fr.py(fits[i].predict(nb))) +
           "\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"/>\n";
    }
    for (const auto& p : c.points)
      s += "<circle class=\"point\" cx=\"" + fmt2(fr.px(static_cast<double>(p.n_gpus))) +
           "\" cy=\"" + fmt2(fr.py(p.epoch_time)) + "\" r=\"4\"/>\n";
    s += "</g>\n";
  }

  // Legend.
  s += "<g class=\"legend\" font-family=\"sans-serif\" font-size=\"12\">\n";
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const double y = y0 + 12 + 20.0 * static_cast<double>(i);
    const double x = x1 + 16;
    std::string text = detail::xml_escape(curves[i].label);
    if (i < fits.size()) text += " (beta=" + fmt2(fits[i].beta) + ")";
    s += "<circle cx=\"" + fmt2(x) + "\" cy=\"" + fmt2(y - 4) + "\" r=\"4\" fill=\"" +
         detail::series_color(i) + "\"/>\n";
    s += "<text x=\"" + fmt2(x + 10) + "\" y=\"" + fmt2(y) + "\">" + text + "</text>\n";
  }
  s += "</g>\n";
  s += "</svg>\n";
  return s;
}

inline void emit_plot(const std::vector<ScalingCurve>& curves,
                      const std::vector<PowerLawFit>& fits, const std::filesystem::path& path) {
  write_text_file(path, render_plot_svg(curves, fits), "emit_plot");
}

}  // namespace gpuscale
