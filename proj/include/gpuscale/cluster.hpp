// Copyright 2026 The gpuscale Authors
// SPDX-License-Identifier: Apache-2.0
//
// Two-level cluster (GPUs inside nodes, nodes over an interconnect) and the
// cost of a gradient all-reduce on it.

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "gpuscale/error.hpp"
#include "gpuscale/workload.hpp"

namespace gpuscale {

using BytesPerSecond = double;

struct ClusterSpec {
  GpuCount gpus_per_node = 2;
  BytesPerSecond intra_bandwidth = 5e10;
  BytesPerSecond inter_bandwidth = 5e9;
  Seconds intra_latency = 1e-5;
  Seconds inter_latency = 1e-4;
  Seconds step_overhead = 1e-3;
};

/// Throws on hard violations; returns soft warnings (slower intra-node links).
inline std::vector<std::string> validate(const ClusterSpec& c) {
  auto finite_nonneg = [](double v) { return std::isfinite(v) && v >= 0; };
  if (c.gpus_per_node < 1)
    throw validation_error("cluster: gpus_per_node must be >= 1, got " +
                           std::to_string(c.gpus_per_node));
  // Infinite bandwidth is allowed (communication-free limit); NaN is not.
  if (!(c.intra_bandwidth > 0))
    throw validation_error("cluster: intra_bandwidth must be > 0, got " +
                           std::to_string(c.intra_bandwidth));
  if (!(c.inter_bandwidth > 0))
    throw validation_error("cluster: inter_bandwidth must be > 0, got " +
                           std::to_string(c.inter_bandwidth));
  if (!finite_nonneg(c.intra_latency))
    throw validation_error("cluster: intra_latency must be >= 0, got " +
                           std::to_string(c.intra_latency));
  if (!finite_nonneg(c.inter_latency))
    throw validation_error("cluster: inter_latency must be >= 0, got " +
                           std::to_string(c.inter_latency));
  if (!finite_nonneg(c.step_overhead))
    throw validation_error("cluster: step_overhead must be >= 0, got " +
                           std::to_string(c.step_overhead));

  std::vector<std::string> warnings;
  if (c.intra_bandwidth < c.inter_bandwidth)
    warnings.push_back("cluster: intra_bandwidth is lower than inter_bandwidth");
  return warnings;
}

/// Ring all-reduce: 2(p-1)/p * M/B bandwidth term plus 2(p-1) latency hops
/// (reduce-scatter then all-gather).
inline Seconds ring_allreduce_time(double message_bytes, GpuCount participants,
                                   BytesPerSecond bandwidth, Seconds latency) {
  if (participants <= 1) return 0.0;
  const double p = static_cast<double>(participants);
  return 2.0 * (p - 1.0) / p * message_bytes / bandwidth +
         2.0 * (p - 1.0) * latency;
}

/// Hierarchical all-reduce: a full intra-node ring followed by a full
/// inter-node ring over ceil(n / g) nodes, both on the whole message.
inline Seconds allreduce_time(const ClusterSpec& c, double message_bytes,
                              GpuCount n_gpus) {
  if (n_gpus <= c.gpus_per_node)
    return ring_allreduce_time(message_bytes, n_gpus, c.intra_bandwidth,
                               c.intra_latency);
  const GpuCount nodes = (n_gpus + c.gpus_per_node - 1) / c.gpus_per_node;
  return ring_allreduce_time(message_bytes, c.gpus_per_node, c.intra_bandwidth,
                             c.intra_latency) +
         ring_allreduce_time(message_bytes, nodes, c.inter_bandwidth,
                             c.inter_latency);
}

}  // namespace gpuscale
