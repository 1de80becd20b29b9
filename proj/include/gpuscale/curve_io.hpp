// Copyright 2026 The gpuscale Authors
// SPDX-License-Identifier: Apache-2.0
//
// Scaling-curve files. CSV: header `n_gpus,epoch_time_s`, LF line endings,
// rows ascending in n_gpus. JSON: {"label": ..., "points": [...]}.

#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>

#include <json.hpp>

#include "gpuscale/config.hpp"
#include "gpuscale/error.hpp"
#include "gpuscale/simulator.hpp"

namespace gpuscale {

inline constexpr std::string_view kCurveCsvHeader = "n_gpus,epoch_time_s";

/// Shortest decimal that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline ScalingCurve parse_curve_csv(std::string_view text, std::string label) {
  ScalingCurve curve{std::move(label), {}};
  auto fail = [&](std::size_t line, const std::string& why) {
    return validation_error("load_curve_csv: '" + curve.label + "' line " +
                            std::to_string(line) + ": " + why);
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool header_seen = false;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (!header_seen) {
      if (line != kCurveCsvHeader)
        throw fail(line_no, "header mismatch, expected '" + std::string(kCurveCsvHeader) +
                                "', got '" + std::string(line) + "'");
      header_seen = true;
      continue;
    }
    if (line.empty()) continue;

    const auto comma = line.find(',');
    if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos)
      throw fail(line_no, "expected 2 cells, got '" + std::string(line) + "'");
    const auto n_cell = line.substr(0, comma);
    const auto t_cell = line.substr(comma + 1);

    CurvePoint p;
    auto rn = std::from_chars(n_cell.data(), n_cell.data() + n_cell.size(), p.n_gpus);
    if (rn.ec != std::errc{} || rn.ptr != n_cell.data() + n_cell.size())
      throw fail(line_no, "non-numeric n_gpus '" + std::string(n_cell) + "'");
    auto rt = std::from_chars(t_cell.data(), t_cell.data() + t_cell.size(), p.epoch_time);
    if (rt.ec != std::errc{} || rt.ptr != t_cell.data() + t_cell.size())
      throw fail(line_no, "non-numeric epoch_time_s '" + std::string(t_cell) + "'");

    if (p.n_gpus < 1) throw fail(line_no, "n_gpus must be >= 1, got " + std::string(n_cell));
    if (!std::isfinite(p.epoch_time) || !(p.epoch_time > 0))
      throw fail(line_no, "epoch_time_s must be > 0, got " + std::string(t_cell));
    if (!curve.points.empty() && p.n_gpus <= curve.points.back().n_gpus)
      throw fail(line_no, "n_gpus not increasing (" + std::to_string(curve.points.back().n_gpus) +
                              " then " + std::to_string(p.n_gpus) + ")");
    curve.points.push_back(p);
  }
  if (!header_seen) throw fail(1, "header mismatch, file is empty");
  if (curve.points.empty()) throw fail(line_no, "no data rows");
  return curve;
}

inline std::string read_text_file(const std::filesystem::path& path, const char* op) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error(std::string(op) + ": cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text,
                            const char* op) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error(std::string(op) + ": cannot write '" + path.string() + "'");
  out << text;
  out.flush();
  if (!out) throw io_error(std::string(op) + ": write failed for '" + path.string() + "'");
}

/// Label defaults to the file stem.
inline ScalingCurve load_curve_csv(const std::filesystem::path& path) {
  return parse_curve_csv(read_text_file(path, "load_curve_csv"), path.stem().string());
}

inline std::string curve_to_csv(const ScalingCurve& curve) {
  std::string out(kCurveCsvHeader);
  out += '\n';
  for (const auto& p : curve.points)
    out += std::to_string(p.n_gpus) + "," + format_double(p.epoch_time) + "\n";
  return out;
}

inline nlohmann::ordered_json curve_to_json(const ScalingCurve& curve) {
  nlohmann::ordered_json j;
  j["label"] = curve.label;
  j["points"] = nlohmann::ordered_json::array();
  for (const auto& p : curve.points)
    j["points"].push_back({{"n_gpus", p.n_gpus}, {"epoch_time_s", p.epoch_time}});
  return j;
}

inline void emit_curve(const ScalingCurve& curve, const std::filesystem::path& path,
                       CurveFormat format = CurveFormat::csv) {
  const std::string text =
      format == CurveFormat::csv ? curve_to_csv(curve) : curve_to_json(curve).dump(2) + "\n";
  write_text_file(path, text, "emit_curve");
}

}  // namespace gpuscale
