// Copyright 2026 The gpuscale Authors
// SPDX-License-Identifier: Apache-2.0
//
// gpuscale: simulate multi-GPU epoch times and analyze scaling curves.
//
//   gpuscale run      --config configs/paper-grid.json [--out DIR] [--seed N]
//   gpuscale sweep    --config FILE [--out DIR] [--format csv|json]
//   gpuscale fit      --curve FILE [--format md|json]
//   gpuscale speedup  --curve FILE --from N --to N
//   gpuscale knee     --curve FILE [--threshold X]
//   gpuscale allocate --curve FILE --target SECONDS [--n-max N]
//   gpuscale report   --config FILE | --curve FILE --params P ... [--format md|csv|json]
//   gpuscale plot     --config FILE | --curve FILE ... --out DIR

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gpuscale.hpp"

namespace {

using namespace gpuscale;

struct Options {
  std::string config;
  std::vector<std::string> curves;
  std::string out;
  std::string format;
  double threshold = 1.25;
  std::optional<std::uint64_t> seed;
  GpuCount from = 0, to = 0;
  double target = 0;
  std::optional<GpuCount> n_max;
  std::vector<std::uint64_t> params;
  bool truncate_at_min = false;
};

RunConfig load_with_overrides(const Options& o) {
  RunConfig cfg = load_config(o.config);
  if (o.seed)
    for (auto& e : cfg.experiments) e.seed = *o.seed;
  if (!o.out.empty()) cfg.output.directory = o.out;
  return cfg;
}

ScalingCurve single_curve(const Options& o, const char* cmd) {
  if (o.curves.size() != 1)
    throw validation_error(std::string(cmd) + ": exactly one --curve is required");
  auto c = load_curve_csv(o.curves.front());
  validate(c);
  return c;
}

// Curves from --config sweeps or --curve files, with parameter counts.
std::vector<std::pair<ScalingCurve, std::uint64_t>> gather_curves(const Options& o, const char* cmd) {
  std::vector<std::pair<ScalingCurve, std::uint64_t>> out;
  if (!o.config.empty()) {
    for (const auto& e : load_with_overrides(o).experiments)
      out.emplace_back(sweep(e), e.workload.param_count);
  }
  if (!o.params.empty() && o.params.size() != o.curves.size())
    throw validation_error(std::string(cmd) + ": got " + std::to_string(o.params.size()) +
                           " --params for " + std::to_string(o.curves.size()) + " --curve");
  for (std::size_t i = 0; i < o.curves.size(); ++i)
    out.emplace_back(load_curve_csv(o.curves[i]), o.params.empty() ? 0 : o.params[i]);
  if (out.empty()) throw validation_error(std::string(cmd) + ": need --config or --curve");
  return out;
}

void print_fit(const ScalingCurve& c, const PowerLawFit& f, const std::string& format) {
  if (format == "json") {
    nlohmann::ordered_json j;
    j["label"] = c.label;
    j["alpha"] = f.alpha;
    j["beta"] = f.beta;
    j["r_squared"] = f.r_squared;
    j["n_points"] = f.n_points;
    j["two_point"] = f.two_point;
    j["anti_scaling"] = f.anti_scaling();
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << c.label << ": alpha=" << format_double(f.alpha)
              << " beta=" << format_double(f.beta) << " R2=" << format_double(f.r_squared)
              << " points=" << f.n_points << (f.two_point ? " (two-point fit)" : "")
              << (f.anti_scaling() ? " (anti-scaling)" : "") << "\n";
  }
}

int cmd_run(const Options& o) {
  if (o.config.empty()) throw validation_error("run: --config is required");
  return run(load_with_overrides(o), std::cerr);
}

int cmd_sweep(const Options& o) {
  if (o.config.empty()) throw validation_error("sweep: --config is required");
  const auto cfg = load_with_overrides(o);
  CurveFormat fmt = cfg.output.curves;
  if (o.format == "json") fmt = CurveFormat::json;
  else if (o.format == "csv") fmt = CurveFormat::csv;
  else if (!o.format.empty())
    throw validation_error("sweep: --format must be csv or json, got \"" + o.format + "\"");

  for (const auto& e : cfg.experiments) {
    const auto curve = sweep(e);
    if (o.out.empty()) {
      if (cfg.experiments.size() > 1) std::cout << "# " << e.label << "\n";
      std::cout << (fmt == CurveFormat::csv ? curve_to_csv(curve) : curve_to_json(curve).dump(2) + "\n");
    } else {
      std::filesystem::create_directories(o.out);
      const auto path = std::filesystem::path(o.out) /
                        (file_stem(e.label) + (fmt == CurveFormat::csv ? ".csv" : ".json"));
      emit_curve(curve, path, fmt);
      std::cout << path.string() << "\n";
    }
  }
  return 0;
}

int cmd_fit(const Options& o) {
  const auto c = single_curve(o, "fit");
  print_fit(c, fit_power_law(c, FitOptions{o.truncate_at_min}), o.format);
  return 0;
}

int cmd_speedup(const Options& o) {
  const auto c = single_curve(o, "speedup");
  const double measured = speedup(c, o.from, o.to);
  std::cout << "measured " << format_double(measured);
  if (c.points.size() >= 2)
    std::cout << " predicted " << format_double(predicted_speedup(fit_power_law(c), o.from, o.to));
  std::cout << "\n";
  return 0;
}

int cmd_knee(const Options& o) {
  const auto c = single_curve(o, "knee");
  const auto k = detect_knee(c, o.threshold);
  std::cout << (k ? std::to_string(*k) : std::string("none")) << "\n";
  return 0;
}

int cmd_allocate(const Options& o) {
  const auto c = single_curve(o, "allocate");
  const auto fit = fit_power_law(c, FitOptions{o.truncate_at_min});
  const auto plan = allocate_for_target(fit, o.target, o.n_max.value_or(c.points.back().n_gpus));
  std::cout << "n_gpus " << plan.n_gpus << "\npredicted_epoch_time_s "
            << format_double(plan.predicted_epoch_time) << "\nspeedup_vs_baseline "
            << format_double(plan.speedup_vs_baseline) << "\nefficiency "
            << format_double(plan.efficiency) << "\ngpu_seconds_per_epoch "
            << format_double(plan.gpu_seconds_per_epoch) << "\n";
  if (plan.unreachable) std::cout << "unreachable (target not met at n_max)\n";
  return 0;
}

int cmd_report(const Options& o) {
  std::vector<ReportEntry> entries;
  for (const auto& [curve, params] : gather_curves(o, "report"))
    entries.push_back({curve.label, params, fit_power_law(curve, FitOptions{o.truncate_at_min})});
  ReportFormat fmt = ReportFormat::md;
  if (o.format == "csv") fmt = ReportFormat::csv;
  else if (o.format == "json") fmt = ReportFormat::json;
  else if (!o.format.empty() && o.format != "md")
    throw validation_error("report: --format must be md, csv or json, got \"" + o.format + "\"");
  std::cout << detail::report_text(make_report(entries), fmt);
  return 0;
}

int cmd_plot(const Options& o) {
  if (o.out.empty()) throw validation_error("plot: --out is required");
  std::vector<ScalingCurve> curves;
  std::vector<PowerLawFit> fits;
  for (auto& [curve, params] : gather_curves(o, "plot")) {
    fits.push_back(fit_power_law(curve, FitOptions{o.truncate_at_min}));
    curves.push_back(std::move(curve));
  }
  std::filesystem::create_directories(o.out);
  const auto path = std::filesystem::path(o.out) / "scaling.svg";
  emit_plot(curves, fits, path);
  std::cout << path.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulate data-parallel GPU scaling and fit power laws t = alpha * n^-beta"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON run configuration");
    sub->add_option("--curve", o.curves, "Curve CSV (n_gpus,epoch_time_s)");
    sub->add_option("--out", o.out, "Output directory");
    sub->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"csv", "json", "md"}));
    sub->add_option("--threshold", o.threshold, "Knee threshold (per-doubling speedup)");
    sub->add_option("--seed", o.seed, "Override every experiment's noise seed");
    sub->add_flag("--truncate-at-min", o.truncate_at_min, "Fit only up to the fastest point");
  };

  std::vector<std::pair<CLI::App*, int (*)(const Options&)>> commands;
  auto add = [&](const char* name, const char* help, int (*fn)(const Options&)) {
    auto* sub = app.add_subcommand(name, help);
    add_common(sub);
    commands.emplace_back(sub, fn);
    return sub;
  };
  add("run", "Sweep, fit and report every experiment in a config", cmd_run);
  add("sweep", "Simulate epoch times over each experiment's GPU grid", cmd_sweep);
  add("fit", "Fit a power law to a curve", cmd_fit);
  auto* sp = add("speedup", "Speedup between two GPU counts of a curve", cmd_speedup);
  sp->add_option("--from", o.from, "Baseline GPU count")->required();
  sp->add_option("--to", o.to, "Target GPU count")->required();
  add("knee", "Diminishing-returns knee of a curve", cmd_knee);
  auto* al = add("allocate", "Fewest GPUs meeting a target epoch time", cmd_allocate);
  al->add_option("--target", o.target, "Target epoch time in seconds")->required();
  al->add_option("--n-max", o.n_max, "Largest allocatable GPU count");
  auto* rp = add("report", "Markdown table of fitted exponents", cmd_report);
  rp->add_option("--params", o.params, "Parameter count per --curve");
  auto* pl = add("plot", "Log-log SVG plot of curves and fits", cmd_plot);
  pl->add_option("--params", o.params, "Ignored; accepted for symmetry with report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(ErrorKind::validation);
  }

  try {
    for (auto& [sub, fn] : commands)
      if (sub->parsed()) return fn(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ErrorKind::io);
  }
  return 0;
}
