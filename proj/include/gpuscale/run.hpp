// Copyright 2026 The gpuscale Authors
// SPDX-License-Identifier: Apache-2.0
//
// End-to-end pipeline for a RunConfig: sweep -> fit -> knee -> speedups ->
// allocation, then curve files, report, plot and summary under one directory.

#pragma once

#include <cctype>
#include <filesystem>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "gpuscale/config.hpp"
#include "gpuscale/curve_io.hpp"
#include "gpuscale/plot.hpp"
#include "gpuscale/scaling.hpp"
#include "gpuscale/simulator.hpp"

namespace gpuscale {

struct ExperimentResult {
  std::string label;
  std::uint64_t param_count = 0;
  ScalingCurve curve;
  PowerLawFit fit;
  CurvePoint min_time;
  std::optional<GpuCount> knee;
  GpuCount baseline_n = 1;
  std::vector<AllocationPlan> allocations;
  std::vector<std::string> warnings;
};

struct RunResult {
  std::vector<ExperimentResult> experiments;
  std::vector<std::filesystem::path> artifacts;
};

/// Lowercase [a-z0-9_-] file stem for a label.
inline std::string file_stem(const std::string& label) {
  std::string out;
  for (unsigned char c : label) {
    if (std::isalnum(c)) out += static_cast<char>(std::tolower(c));
    else if (c == '-' || c == '_') out += static_cast<char>(c);
    else out += '_';
  }
  return out.empty() ? "curve" : out;
}

inline ExperimentResult analyze(const ScalingCurve& curve, std::uint64_t param_count,
                                const AnalysisOptions& opts) {
  ExperimentResult r;
  r.label = curve.label;
  r.param_count = param_count;
  r.curve = curve;
  r.fit = fit_power_law(curve, FitOptions{opts.truncate_at_min});
  r.min_time = find_min_time(curve);
  r.knee = detect_knee(curve, opts.knee_threshold);
  r.baseline_n = opts.baseline_n.value_or(curve.points.front().n_gpus);
  time_at(curve, r.baseline_n);  // must be a grid point
  const GpuCount n_max = opts.allocation_n_max.value_or(curve.points.back().n_gpus);
  for (Seconds target : opts.allocation_targets)
    r.allocations.push_back(allocate_for_target(r.fit, target, n_max));
  if (r.fit.two_point) r.warnings.push_back("two-point fit: R2 is 1 by construction");
  if (r.fit.anti_scaling()) r.warnings.push_back("anti-scaling curve: beta < 0");
  return r;
}

namespace detail {

inline nlohmann::ordered_json plan_json(const AllocationPlan& p) {
  nlohmann::ordered_json j;
  j["target_epoch_time_s"] = p.target_epoch_time;
  j["n_gpus"] = p.n_gpus;
  j["predicted_epoch_time_s"] = p.predicted_epoch_time;
  j["speedup_vs_baseline"] = p.speedup_vs_baseline;
  j["efficiency"] = p.efficiency;
  j["gpu_seconds_per_epoch"] = p.gpu_seconds_per_epoch;
  j["unreachable"] = p.unreachable;
  return j;
}

inline nlohmann::ordered_json result_json(const ExperimentResult& r) {
  nlohmann::ordered_json j;
  j["label"] = r.label;
  j["param_count"] = r.param_count;
  j["fit"] = {{"alpha", r.fit.alpha},           {"beta", r.fit.beta},
              {"r_squared", r.fit.r_squared},   {"n_points", r.fit.n_points},
              {"two_point", r.fit.two_point},   {"anti_scaling", r.fit.anti_scaling()}};
  j["min_time"] = {{"n_gpus", r.min_time.n_gpus}, {"epoch_time_s", r.min_time.epoch_time}};
  j["knee_n_gpus"] = r.knee ? nlohmann::ordered_json(*r.knee) : nlohmann::ordered_json(nullptr);
  auto& sp = j["speedups"];
  sp["baseline_n"] = r.baseline_n;
  sp["points"] = nlohmann::ordered_json::array();
  for (const auto& p : r.curve.points)
    sp["points"].push_back({{"n_gpus", p.n_gpus},
                            {"measured", speedup(r.curve, r.baseline_n, p.n_gpus)},
                            {"predicted", predicted_speedup(r.fit, r.baseline_n, p.n_gpus)}});
  j["allocations"] = nlohmann::ordered_json::array();
  for (const auto& p : r.allocations) j["allocations"].push_back(plan_json(p));
  j["warnings"] = r.warnings;
  return j;
}

inline std::string summary_markdown(const std::vector<ExperimentResult>& results,
                                    double knee_threshold) {
  std::string s = "# Scaling summary\n\n";
  s += "| Model | alpha (s) | beta | R2 | fastest | knee (threshold " + fmt2(knee_threshold) +
       ") |\n|---|---|---|---|---|---|\n";
  for (const auto& r : results) {
    s += "| " + r.label + " | " + format_double(r.fit.alpha) + " | " + format_fixed2(r.fit.beta) +
         " | " + format_fixed2(r.fit.r_squared) + " | " + format_double(r.min_time.epoch_time) +
         " s @ " + std::to_string(r.min_time.n_gpus) + " | " +
         (r.knee ? std::to_string(*r.knee) : std::string("none")) + " |\n";
  }
  bool any_plan = false;
  for (const auto& r : results) any_plan = any_plan || !r.allocations.empty();
  if (any_plan) {
    s += "\n## Allocations\n\n| Model | target (s) | GPUs | predicted (s) | efficiency | reachable |\n"
         "|---|---|---|---|---|---|\n";
    for (const auto& r : results)
      for (const auto& p : r.allocations)
        s += "| " + r.label + " | " + format_double(p.target_epoch_time) + " | " +
             std::to_string(p.n_gpus) + " | " + format_double(p.predicted_epoch_time) + " | " +
             format_fixed2(p.efficiency) + " | " + (p.unreachable ? "no" : "yes") + " |\n";
  }
  return s;
}

inline std::string report_text(const std::vector<ReportRow>& rows, ReportFormat format) {
  switch (format) {
    case ReportFormat::md:
      return report_markdown(rows);
    case ReportFormat::csv: {
      std::string s = "model,number_of_parameters,beta,r2\n";
      for (const auto& r : rows)
        s += r.model + "," + r.parameters + "," + r.beta + "," + r.r_squared + "\n";
      return s;
    }
    case ReportFormat::json: {
      auto j = nlohmann::ordered_json::array();
      for (const auto& r : rows)
        j.push_back({{"model", r.model},
                     {"number_of_parameters", r.parameters},
                     {"beta", r.beta},
                     {"r2", r.r_squared}});
      return j.dump(2) + "\n";
    }
  }
  return {};
}

inline const char* extension(ReportFormat f) {
  return f == ReportFormat::md ? ".md" : f == ReportFormat::csv ? ".csv" : ".json";
}

}  // namespace detail

/// Runs every experiment and writes artifacts into cfg.output.directory.
/// Errors carry the experiment label; the first failure aborts the run.
inline RunResult run_experiments(const RunConfig& cfg) {
  namespace fs = std::filesystem;
  RunResult result;
  const fs::path dir = cfg.output.directory;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw io_error("run: cannot create output directory '" + dir.string() + "': " + ec.message());

  std::set<std::string> stems;
  std::vector<ReportEntry> entries;
  std::vector<ScalingCurve> curves;
  std::vector<PowerLawFit> fits;
  for (const auto& e : cfg.experiments) {
    try {
      const std::string stem = file_stem(e.label);
      if (!stems.insert(stem).second)
        throw validation_error("labels map to the same file name '" + stem + "'");
      auto warnings = validate(e.cluster);
      ScalingCurve curve = sweep(e);
      ExperimentResult r = analyze(curve, e.workload.param_count, cfg.analysis);
      if (e.drop_last && steps_per_epoch(e.workload, e.gpu_counts.back(), true).clamped)
        warnings.push_back("drop_last leaves no full batch at the largest GPU counts; clamped to 1 step");
      r.warnings.insert(r.warnings.begin(), warnings.begin(), warnings.end());

      const fs::path curve_path =
          dir / (stem + (cfg.output.curves == CurveFormat::csv ? ".csv" : ".json"));
      emit_curve(curve, curve_path, cfg.output.curves);
      result.artifacts.push_back(curve_path);

      entries.push_back({e.label, e.workload.param_count, r.fit});
      curves.push_back(curve);
      fits.push_back(r.fit);
      result.experiments.push_back(std::move(r));
    } catch (const Error& err) {
      throw Error(err.kind(), "run: experiment '" + e.label + "': " + err.what());
    }
  }

  const fs::path report_path = dir / (std::string("report") + detail::extension(cfg.output.report));
  write_text_file(report_path, detail::report_text(make_report(entries), cfg.output.report), "run");
  result.artifacts.push_back(report_path);

  const fs::path plot_path = dir / "scaling.svg";
  emit_plot(curves, fits, plot_path);
  result.artifacts.push_back(plot_path);

  fs::path summary_path;
  std::string summary;
  if (cfg.output.summary == SummaryFormat::json) {
    nlohmann::ordered_json j;
    j["knee_threshold"] = cfg.analysis.knee_threshold;
    j["truncate_at_min"] = cfg.analysis.truncate_at_min;
    j["experiments"] = nlohmann::ordered_json::array();
    for (const auto& r : result.experiments) j["experiments"].push_back(detail::result_json(r));
    summary = j.dump(2) + "\n";
    summary_path = dir / "summary.json";
  } else {
    summary = detail::summary_markdown(result.experiments, cfg.analysis.knee_threshold);
    summary_path = dir / "summary.md";
  }
  write_text_file(summary_path, summary, "run");
  result.artifacts.push_back(summary_path);
  return result;
}

/// Exit status: 0 success, 1 validation, 2 I/O, 3 analysis. Diagnostics go to `err`.
inline int run(const RunConfig& cfg, std::ostream& err) {
  try {
    const auto result = run_experiments(cfg);
    for (const auto& r : result.experiments)
      for (const auto& w : r.warnings) err << "warning: " << r.label << ": " << w << "\n";
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.exit_code();
  }
}

}  // namespace gpuscale
