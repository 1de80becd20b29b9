// Copyright 2026 The gpuscale Authors
// SPDX-License-Identifier: Apache-2.0
//
// JSON run configuration. See docs/config.md for the schema.

#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gpuscale/error.hpp"
#include "gpuscale/presets.hpp"
#include "gpuscale/simulator.hpp"

namespace gpuscale {

struct AnalysisOptions {
  double knee_threshold = 1.25;
  std::optional<GpuCount> baseline_n;  // defaults to each curve's first point
  std::vector<Seconds> allocation_targets;
  std::optional<GpuCount> allocation_n_max;  // defaults to each curve's last point
  bool truncate_at_min = false;
};

enum class CurveFormat { csv, json };
enum class ReportFormat { md, csv, json };
enum class SummaryFormat { json, md };

struct OutputOptions {
  std::filesystem::path directory = "out";
  CurveFormat curves = CurveFormat::csv;
  ReportFormat report = ReportFormat::md;
  SummaryFormat summary = SummaryFormat::json;
};

struct RunConfig {
  std::vector<ExperimentSpec> experiments;
  AnalysisOptions analysis;
  OutputOptions output;
};

namespace detail {

using nlohmann::json;

inline std::string show(const json& v) { return v.dump(); }

inline void reject_unknown_keys(const json& obj, const std::string& where,
                                std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed) ok = ok || it.key() == k;
    if (!ok) throw validation_error("load_config: unknown key '" + where + "." + it.key() + "'");
  }
}

inline const json& require_object(const json& v, const std::string& key) {
  if (!v.is_object())
    throw validation_error("load_config: '" + key + "' must be an object, got " + show(v));
  return v;
}

inline double get_number(const json& v, const std::string& key) {
  if (!v.is_number())
    throw validation_error("load_config: '" + key + "' must be a number, got " + show(v));
  return v.get<double>();
}

inline std::int64_t get_integer(const json& v, const std::string& key) {
  if (!v.is_number_integer())
    throw validation_error("load_config: '" + key + "' must be an integer, got " + show(v));
  return v.get<std::int64_t>();
}

inline std::uint64_t get_unsigned(const json& v, const std::string& key) {
  const auto i = get_integer(v, key);
  if (i < 0)
    throw validation_error("load_config: '" + key + "' must be non-negative, got " + show(v));
  return static_cast<std::uint64_t>(i);
}

inline bool get_bool(const json& v, const std::string& key) {
  if (!v.is_boolean())
    throw validation_error("load_config: '" + key + "' must be a boolean, got " + show(v));
  return v.get<bool>();
}

inline std::string get_string(const json& v, const std::string& key) {
  if (!v.is_string())
    throw validation_error("load_config: '" + key + "' must be a string, got " + show(v));
  return v.get<std::string>();
}

inline void read_workload(const json& j, const std::string& where, WorkloadSpec& w) {
  require_object(j, where);
  reject_unknown_keys(j, where,
                      {"name", "param_count", "bytes_per_param", "dataset_size",
                       "batch_size_per_device", "compute_time_per_sample", "epochs",
                       "batch_mode"});
  if (j.contains("name")) w.name = get_string(j["name"], where + ".name");
  if (j.contains("param_count")) w.param_count = get_unsigned(j["param_count"], where + ".param_count");
  if (j.contains("bytes_per_param"))
    w.bytes_per_param = static_cast<std::uint32_t>(
        get_unsigned(j["bytes_per_param"], where + ".bytes_per_param"));
  if (j.contains("dataset_size"))
    w.dataset_size = get_unsigned(j["dataset_size"], where + ".dataset_size");
  if (j.contains("batch_size_per_device"))
    w.batch_size_per_device =
        get_unsigned(j["batch_size_per_device"], where + ".batch_size_per_device");
  if (j.contains("compute_time_per_sample"))
    w.compute_time_per_sample =
        get_number(j["compute_time_per_sample"], where + ".compute_time_per_sample");
  if (j.contains("epochs"))
    w.epochs = static_cast<std::uint32_t>(get_unsigned(j["epochs"], where + ".epochs"));
  if (j.contains("batch_mode")) {
    const auto mode = get_string(j["batch_mode"], where + ".batch_mode");
    if (mode == "per_device") w.batch_mode = BatchMode::per_device;
    else if (mode == "global") w.batch_mode = BatchMode::global;
    else
      throw validation_error("load_config: '" + where +
                             ".batch_mode' must be \"per_device\" or \"global\", got \"" +
                             mode + "\"");
  }
}

inline void read_cluster(const json& j, const std::string& where, ClusterSpec& c) {
  require_object(j, where);
  reject_unknown_keys(j, where,
                      {"gpus_per_node", "intra_bandwidth", "inter_bandwidth", "intra_latency",
                       "inter_latency", "step_overhead"});
  if (j.contains("gpus_per_node")) c.gpus_per_node = get_integer(j["gpus_per_node"], where + ".gpus_per_node");
  if (j.contains("intra_bandwidth"))
    c.intra_bandwidth = get_number(j["intra_bandwidth"], where + ".intra_bandwidth");
  if (j.contains("inter_bandwidth"))
    c.inter_bandwidth = get_number(j["inter_bandwidth"], where + ".inter_bandwidth");
  if (j.contains("intra_latency"))
    c.intra_latency = get_number(j["intra_latency"], where + ".intra_latency");
  if (j.contains("inter_latency"))
    c.inter_latency = get_number(j["inter_latency"], where + ".inter_latency");
  if (j.contains("step_overhead"))
    c.step_overhead = get_number(j["step_overhead"], where + ".step_overhead");
}

inline ExperimentSpec read_experiment(const json& j, std::size_t index) {
  const std::string where = "experiments[" + std::to_string(index) + "]";
  require_object(j, where);
  reject_unknown_keys(j, where,
                      {"label", "preset", "workload", "cluster", "gpu_counts", "noise_sigma",
                       "seed", "drop_last"});

  ExperimentSpec e;
  e.cluster = presets::reference_cluster();
  e.gpu_counts = presets::paper_grid();
  if (j.contains("preset")) {
    const auto name = get_string(j["preset"], where + ".preset");
    auto p = presets::experiment(name);
    if (!p) throw validation_error("load_config: unknown preset '" + where + ".preset' = \"" + name + "\"");
    e = *p;
  }
  if (j.contains("label")) e.label = get_string(j["label"], where + ".label");
  if (e.label.empty())
    throw validation_error("load_config: '" + where + ".label' is required (or set a preset)");
  if (j.contains("workload")) read_workload(j["workload"], where + ".workload", e.workload);
  if (!j.contains("workload") || !j["workload"].contains("name")) e.workload.name = e.label;
  if (j.contains("cluster")) read_cluster(j["cluster"], where + ".cluster", e.cluster);
  if (j.contains("gpu_counts")) {
    const auto& g = j["gpu_counts"];
    if (!g.is_array())
      throw validation_error("load_config: '" + where + ".gpu_counts' must be an array, got " + show(g));
    e.gpu_counts.clear();
    for (std::size_t i = 0; i < g.size(); ++i)
      e.gpu_counts.push_back(get_integer(g[i], where + ".gpu_counts[" + std::to_string(i) + "]"));
  }
  if (j.contains("noise_sigma")) e.noise_sigma = get_number(j["noise_sigma"], where + ".noise_sigma");
  if (j.contains("seed")) e.seed = get_unsigned(j["seed"], where + ".seed");
  if (j.contains("drop_last")) e.drop_last = get_bool(j["drop_last"], where + ".drop_last");

  try {
    validate(e);
  } catch (const Error& err) {
    throw validation_error("load_config: " + where + ": " + err.what());
  }
  return e;
}

inline AnalysisOptions read_analysis(const json& j) {
  AnalysisOptions a;
  require_object(j, "analysis");
  reject_unknown_keys(j, "analysis",
                      {"knee_threshold", "baseline_n", "allocation_targets", "allocation_n_max",
                       "truncate_at_min"});
  if (j.contains("knee_threshold")) {
    a.knee_threshold = get_number(j["knee_threshold"], "analysis.knee_threshold");
    if (!(a.knee_threshold > 1))
      throw validation_error("load_config: 'analysis.knee_threshold' must be > 1, got " +
                             show(j["knee_threshold"]));
  }
  if (j.contains("baseline_n")) {
    a.baseline_n = get_integer(j["baseline_n"], "analysis.baseline_n");
    if (*a.baseline_n < 1)
      throw validation_error("load_config: 'analysis.baseline_n' must be >= 1, got " +
                             show(j["baseline_n"]));
  }
  if (j.contains("allocation_targets")) {
    const auto& t = j["allocation_targets"];
    if (!t.is_array())
      throw validation_error("load_config: 'analysis.allocation_targets' must be an array, got " +
                             show(t));
    for (std::size_t i = 0; i < t.size(); ++i) {
      const std::string key = "analysis.allocation_targets[" + std::to_string(i) + "]";
      const double v = get_number(t[i], key);
      if (!(v > 0)) throw validation_error("load_config: '" + key + "' must be > 0, got " + show(t[i]));
      a.allocation_targets.push_back(v);
    }
  }
  if (j.contains("allocation_n_max")) {
    a.allocation_n_max = get_integer(j["allocation_n_max"], "analysis.allocation_n_max");
    if (*a.allocation_n_max < 1)
      throw validation_error("load_config: 'analysis.allocation_n_max' must be >= 1, got " +
                             show(j["allocation_n_max"]));
  }
  if (j.contains("truncate_at_min"))
    a.truncate_at_min = get_bool(j["truncate_at_min"], "analysis.truncate_at_min");
  return a;
}

inline OutputOptions read_output(const json& j) {
  OutputOptions o;
  require_object(j, "output");
  reject_unknown_keys(j, "output", {"directory", "curves", "report", "summary"});
  if (j.contains("directory")) o.directory = get_string(j["directory"], "output.directory");
  auto bad = [](const std::string& key, const std::string& v, const char* allowed) {
    return validation_error("load_config: 'output." + key + "' must be one of " + allowed +
                            ", got \"" + v + "\"");
  };
  if (j.contains("curves")) {
    const auto v = get_string(j["curves"], "output.curves");
    if (v == "csv") o.curves = CurveFormat::csv;
    else if (v == "json") o.curves = CurveFormat::json;
    else throw bad("curves", v, "{csv, json}");
  }
  if (j.contains("report")) {
    const auto v = get_string(j["report"], "output.report");
    if (v == "md") o.report = ReportFormat::md;
    else if (v == "csv") o.report = ReportFormat::csv;
    else if (v == "json") o.report = ReportFormat::json;
    else throw bad("report", v, "{md, csv, json}");
  }
  if (j.contains("summary")) {
    const auto v = get_string(j["summary"], "output.summary");
    if (v == "json") o.summary = SummaryFormat::json;
    else if (v == "md") o.summary = SummaryFormat::md;
    else throw bad("summary", v, "{json, md}");
  }
  return o;
}

}  // namespace detail

/// Validates a parsed config document.
inline RunConfig parse_config(const nlohmann::json& doc) {
  if (!doc.is_object())
    throw validation_error("load_config: top level must be an object");
  detail::reject_unknown_keys(doc, "", {"experiments", "analysis", "output"});
  if (!doc.contains("experiments"))
    throw validation_error("load_config: missing required key 'experiments'");
  const auto& ex = doc["experiments"];
  if (!ex.is_array() || ex.empty())
    throw validation_error("load_config: 'experiments' must be a non-empty array, got " +
                           detail::show(ex));

  RunConfig cfg;
  std::set<std::string> labels;
  for (std::size_t i = 0; i < ex.size(); ++i) {
    auto e = detail::read_experiment(ex[i], i);
    if (!labels.insert(e.label).second)
      throw validation_error("load_config: duplicate label 'experiments[" + std::to_string(i) +
                             "].label' = \"" + e.label + "\"");
    cfg.experiments.push_back(std::move(e));
  }
  if (doc.contains("analysis")) cfg.analysis = detail::read_analysis(doc["analysis"]);
  if (doc.contains("output")) cfg.output = detail::read_output(doc["output"]);
  return cfg;
}

inline RunConfig parse_config(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw validation_error(std::string("load_config: malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

inline RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("load_config: cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace gpuscale
