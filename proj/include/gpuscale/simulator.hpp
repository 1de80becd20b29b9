// Copyright 2026 The gpuscale Authors
// SPDX-License-Identifier: Apache-2.0
//
// Epoch-time simulation of data-parallel training across GPU counts.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gpuscale/cluster.hpp"
#include "gpuscale/error.hpp"
#include "gpuscale/workload.hpp"

namespace gpuscale {

struct CurvePoint {
  GpuCount n_gpus = 1;
  Seconds epoch_time = 0.0;

  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

/// Ordered (n_gpus, epoch_time) samples.
struct ScalingCurve {
  std::string label;
  std::vector<CurvePoint> points;

  friend bool operator==(const ScalingCurve&, const ScalingCurve&) = default;
};

/// Enforces: at least one point, strictly increasing n >= 1, finite time > 0.
inline void validate(const ScalingCurve& curve) {
  const std::string where = "curve '" + curve.label + "': ";
  if (curve.points.empty()) throw validation_error(where + "no points");
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    const auto& p = curve.points[i];
    if (p.n_gpus < 1)
      throw validation_error(where + "n_gpus must be >= 1, got " +
                             std::to_string(p.n_gpus));
    if (!std::isfinite(p.epoch_time) || !(p.epoch_time > 0))
      throw validation_error(where + "epoch_time must be finite and > 0 at n_gpus=" +
                             std::to_string(p.n_gpus));
    if (i > 0 && p.n_gpus <= curve.points[i - 1].n_gpus)
      throw validation_error(where + "n_gpus not strictly increasing at " +
                             std::to_string(p.n_gpus));
  }
}

struct ExperimentSpec {
  std::string label;
  WorkloadSpec workload;
  ClusterSpec cluster;
  std::vector<GpuCount> gpu_counts;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  bool drop_last = false;
};

inline void validate(const ExperimentSpec& e) {
  const std::string where = "experiment '" + e.label + "': ";
  validate(e.workload);
  validate(e.cluster);
  if (e.gpu_counts.empty()) throw validation_error(where + "gpu_counts is empty");
  for (std::size_t i = 0; i < e.gpu_counts.size(); ++i) {
    if (e.gpu_counts[i] < 1)
      throw validation_error(where + "gpu_counts[" + std::to_string(i) +
                             "] must be >= 1, got " + std::to_string(e.gpu_counts[i]));
    if (i > 0 && e.gpu_counts[i] <= e.gpu_counts[i - 1])
      throw validation_error(where + "gpu_counts must be strictly increasing, got " +
                             std::to_string(e.gpu_counts[i - 1]) + " then " +
                             std::to_string(e.gpu_counts[i]));
  }
  if (!std::isfinite(e.noise_sigma) || e.noise_sigma < 0)
    throw validation_error(where + "noise_sigma must be >= 0, got " +
                           std::to_string(e.noise_sigma));
}

/// steps * (compute + all-reduce + overhead); purely additive, no overlap.
inline Seconds simulate_epoch_time(const WorkloadSpec& w, const ClusterSpec& c,
                                   GpuCount n_gpus, bool drop_last = false) {
  const auto steps = steps_per_epoch(w, n_gpus, drop_last).steps;
  const double message = static_cast<double>(gradient_message_size(w));
  const Seconds per_step = compute_time_per_step(w, n_gpus) +
                           allreduce_time(c, message, n_gpus) + c.step_overhead;
  return static_cast<double>(steps) * per_step;
}

namespace detail {

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Standard normal draw keyed on (seed, label, n). Box-Muller over raw
// mt19937_64 output so the stream is identical across standard libraries.
inline double keyed_normal(std::uint64_t seed, std::string_view label, GpuCount n) {
  const std::uint64_t key =
      splitmix64(seed ^ splitmix64(fnv1a(label) ^ splitmix64(static_cast<std::uint64_t>(n))));
  std::mt19937_64 gen(key);
  auto uniform = [&gen] {
    // (0, 1]: never zero so the log below is finite.
    return (static_cast<double>(gen() >> 11) + 1.0) * 0x1.0p-53;
  };
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace detail

/// Multiplicative log-normal factor exp(sigma * z) for one grid point.
inline double noise_factor(double sigma, std::uint64_t seed, std::string_view label,
                           GpuCount n) {
  if (sigma == 0.0) return 1.0;
  return std::exp(sigma * detail::keyed_normal(seed, label, n));
}

inline ScalingCurve sweep(const ExperimentSpec& e) {
  validate(e);
  ScalingCurve curve;
  curve.label = e.label;
  curve.points.reserve(e.gpu_counts.size());
  for (GpuCount n : e.gpu_counts) {
    const Seconds t = simulate_epoch_time(e.workload, e.cluster, n, e.drop_last) *
                      noise_factor(e.noise_sigma, e.seed, e.label, n);
    curve.points.push_back({n, t});
  }
  return curve;
}

/// Fastest point; ties go to the smaller GPU count.
inline CurvePoint find_min_time(const ScalingCurve& curve) {
  if (curve.points.empty())
    throw validation_error("find_min_time: curve '" + curve.label + "' is empty");
  CurvePoint best = curve.points.front();
  for (const auto& p : curve.points)
    if (p.epoch_time < best.epoch_time) best = p;
  return best;
}

}  // namespace gpuscale
