// Copyright 2026 The gpuscale Authors
// SPDX-License-Identifier: Apache-2.0
//
// Power-law scaling analysis: t = alpha * n^(-beta) fitted by least squares in
// log-log space, plus the speedup, knee and allocation queries built on it.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "gpuscale/error.hpp"
#include "gpuscale/simulator.hpp"

namespace gpuscale {

struct PowerLawFit {
  double alpha = 1.0;  // predicted epoch time at n = 1
  double beta = 0.0;   // scaling exponent; 1 is perfect strong scaling
  double r_squared = 1.0;
  std::size_t n_points = 0;
  // Two points determine the line exactly; R2 = 1 carries no information.
  bool two_point = false;

  bool anti_scaling() const { return beta < 0; }
  Seconds predict(double n_gpus) const { return alpha * std::pow(n_gpus, -beta); }
};

struct FitOptions {
  // Drop every point after the fastest one before fitting.
  bool truncate_at_min = false;
};

namespace detail {

inline void require_fit_input(const ScalingCurve& curve, const char* op) {
  if (curve.points.size() < 2)
    throw analysis_error(std::string(op) + ": insufficient data for curve '" +
                         curve.label + "' (" + std::to_string(curve.points.size()) +
                         " point(s), need >= 2)");
  for (const auto& p : curve.points) {
    if (!(p.n_gpus >= 1) || !std::isfinite(p.epoch_time) || !(p.epoch_time > 0))
      throw analysis_error(std::string(op) + ": invalid curve '" + curve.label +
                           "' at n_gpus=" + std::to_string(p.n_gpus) +
                           ", epoch_time=" + std::to_string(p.epoch_time));
  }
}

inline ScalingCurve truncated_at_min(const ScalingCurve& curve) {
  const auto best = find_min_time(curve);
  ScalingCurve out{curve.label, {}};
  for (const auto& p : curve.points) {
    out.points.push_back(p);
    if (p.n_gpus == best.n_gpus) break;
  }
  return out;
}

}  // namespace detail

/// 1 - SS_res / SS_tot over ln(t). Residuals below 1e-12 count as zero, so a
/// flat curve with its own fit scores 1.
inline double r_squared_log(const ScalingCurve& curve, const PowerLawFit& fit) {
  detail::require_fit_input(curve, "r_squared_log");
  const double n = static_cast<double>(curve.points.size());
  double mean = 0;
  for (const auto& p : curve.points) mean += std::log(p.epoch_time);
  mean /= n;

  const double log_alpha = std::log(fit.alpha);
  double ss_res = 0, ss_tot = 0;
  bool all_zero = true;
  for (const auto& p : curve.points) {
    const double y = std::log(p.epoch_time);
    const double r = y - (log_alpha - fit.beta * std::log(static_cast<double>(p.n_gpus)));
    if (std::abs(r) > 1e-12) all_zero = false;
    ss_res += r * r;
    ss_tot += (y - mean) * (y - mean);
  }
  if (all_zero) return 1.0;
  if (ss_tot == 0.0)
    throw analysis_error("r_squared_log: degenerate curve '" + curve.label +
                         "' (constant epoch time with nonzero residuals)");
  return 1.0 - ss_res / ss_tot;
}

/// Ordinary least squares on (ln n, ln t): slope = -beta, intercept = ln alpha.
inline PowerLawFit fit_power_law(const ScalingCurve& input, FitOptions opts = {}) {
  const ScalingCurve curve = opts.truncate_at_min ? detail::truncated_at_min(input) : input;
  detail::require_fit_input(curve, "fit_power_law");

  const double m = static_cast<double>(curve.points.size());
  double mean_x = 0, mean_y = 0;
  for (const auto& p : curve.points) {
    mean_x += std::log(static_cast<double>(p.n_gpus));
    mean_y += std::log(p.epoch_time);
  }
  mean_x /= m;
  mean_y /= m;

  double sxx = 0, sxy = 0;
  for (const auto& p : curve.points) {
    const double dx = std::log(static_cast<double>(p.n_gpus)) - mean_x;
    sxx += dx * dx;
    sxy += dx * (std::log(p.epoch_time) - mean_y);
  }
  if (!(sxx > 0))
    throw analysis_error("fit_power_law: invalid curve '" + curve.label +
                         "' (all points share one GPU count)");

  const double slope = sxy / sxx;
  PowerLawFit fit;
  fit.beta = -slope;
  fit.alpha = std::exp(mean_y - slope * mean_x);
  fit.n_points = curve.points.size();
  fit.two_point = fit.n_points == 2;
  fit.r_squared = fit.two_point ? 1.0 : r_squared_log(curve, fit);
  return fit;
}

inline Seconds time_at(const ScalingCurve& curve, GpuCount n) {
  for (const auto& p : curve.points)
    if (p.n_gpus == n) return p.epoch_time;
  throw analysis_error("speedup: count not in curve '" + curve.label +
                       "': n_gpus=" + std::to_string(n));
}

/// Measured speedup t(n_from) / t(n_to).
inline double speedup(const ScalingCurve& curve, GpuCount n_from, GpuCount n_to) {
  const Seconds from = time_at(curve, n_from);
  const Seconds to = time_at(curve, n_to);
  if (n_from == n_to) return 1.0;
  return from / to;
}

/// Speedup implied by the law alone: (n_to / n_from)^beta.
inline double predicted_speedup(const PowerLawFit& fit, GpuCount n_from, GpuCount n_to) {
  if (n_from == n_to) return 1.0;
  return std::pow(static_cast<double>(n_to) / static_cast<double>(n_from), fit.beta);
}

/// Speedup between consecutive grid points rescaled to one doubling of n.
inline std::vector<double> per_doubling_speedups(const ScalingCurve& curve) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < curve.points.size(); ++i) {
    const auto& a = curve.points[i];
    const auto& b = curve.points[i + 1];
    const double doublings =
        std::log(static_cast<double>(b.n_gpus) / static_cast<double>(a.n_gpus)) /
        std::log(2.0);
    out.push_back(std::pow(a.epoch_time / b.epoch_time, 1.0 / doublings));
  }
  return out;
}

/// Smallest grid point from which every later consecutive pair scales by
/// less than `min_doubling_speedup` per doubling. Absent if none does.
inline std::optional<GpuCount> detect_knee(const ScalingCurve& curve,
                                           double min_doubling_speedup = 1.25) {
  if (!(min_doubling_speedup > 1.0) || !std::isfinite(min_doubling_speedup))
    throw analysis_error("detect_knee: invalid threshold " +
                         std::to_string(min_doubling_speedup) + " (must be > 1)");
  detail::require_fit_input(curve, "detect_knee");
  const auto rates = per_doubling_speedups(curve);

  // Walk backwards while the tail stays below the threshold.
  std::optional<GpuCount> knee;
  for (std::size_t i = rates.size(); i-- > 0;) {
    if (!(rates[i] < min_doubling_speedup)) break;
    knee = curve.points[i].n_gpus;
  }
  return knee;
}

struct AllocationPlan {
  GpuCount n_gpus = 1;
  Seconds predicted_epoch_time = 0.0;
  double speedup_vs_baseline = 1.0;
  double efficiency = 1.0;
  double gpu_seconds_per_epoch = 0.0;
  Seconds target_epoch_time = 0.0;
  bool unreachable = false;
};

/// Fewest GPUs (<= n_max) whose predicted epoch time meets the target.
inline AllocationPlan allocate_for_target(const PowerLawFit& fit, Seconds target,
                                          GpuCount n_max) {
  if (!(target > 0) || !std::isfinite(target))
    throw analysis_error("allocate_for_target: invalid target " + std::to_string(target));
  if (!(fit.beta > 0))
    throw analysis_error("allocate_for_target: non-scaling law (beta=" +
                         std::to_string(fit.beta) + ")");
  if (n_max < 1)
    throw analysis_error("allocate_for_target: n_max must be >= 1, got " +
                         std::to_string(n_max));

  const double exact = std::pow(fit.alpha / target, 1.0 / fit.beta);
  GpuCount n = 1;
  if (exact > static_cast<double>(n_max)) {
    n = n_max;
  } else if (exact > 1.0) {
    n = static_cast<GpuCount>(std::ceil(exact));
  }
  // pow() rounding can leave ceil one off in either direction.
  while (n > 1 && fit.predict(static_cast<double>(n - 1)) <= target) --n;
  while (n < n_max && fit.predict(static_cast<double>(n)) > target) ++n;

  AllocationPlan plan;
  plan.n_gpus = n;
  plan.target_epoch_time = target;
  plan.predicted_epoch_time = fit.predict(static_cast<double>(n));
  plan.speedup_vs_baseline = fit.alpha / plan.predicted_epoch_time;
  plan.efficiency = plan.speedup_vs_baseline / static_cast<double>(n);
  plan.gpu_seconds_per_epoch = static_cast<double>(n) * plan.predicted_epoch_time;
  plan.unreachable = plan.predicted_epoch_time > target;
  return plan;
}

struct ReportEntry {
  std::string name;
  std::uint64_t param_count = 1;
  PowerLawFit fit;
};

struct ReportRow {
  std::string model;
  std::string parameters;
  std::string beta;
  std::string r_squared;
};

/// Two significant digits, bare exponent: 2100000 -> "2.1e6".
inline std::string format_param_count(std::uint64_t count) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1e", static_cast<double>(count));
  std::string s(buf);
  const auto e = s.find('e');
  const int exponent = std::stoi(s.substr(e + 1));
  return s.substr(0, e) + "e" + std::to_string(exponent);
}

inline std::string format_fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s(buf);
  if (s == "-0.00") s = "0.00";
  return s;
}

inline std::vector<ReportRow> make_report(const std::vector<ReportEntry>& entries) {
  if (entries.empty()) throw validation_error("make_report: no entries");
  std::vector<ReportRow> rows;
  rows.reserve(entries.size());
  for (const auto& e : entries) {
    ReportRow row{e.name, format_param_count(e.param_count), format_fixed2(e.fit.beta),
                  format_fixed2(e.fit.r_squared)};
    if (e.fit.two_point) row.r_squared += " (two-point fit)";
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::string report_markdown(const std::vector<ReportRow>& rows) {
  std::string out = "| Model | Number of Parameters | beta | R2 |\n";
  out += "|---|---|---|---|\n";
  for (const auto& r : rows)
    out += "| " + r.model + " | " + r.parameters + " | " + r.beta + " | " + r.r_squared + " |\n";
  return out;
}

}  // namespace gpuscale
