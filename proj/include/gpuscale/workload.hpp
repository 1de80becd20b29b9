// Copyright 2026 The gpuscale Authors
// SPDX-License-Identifier: Apache-2.0
//
// Training workload description and the per-step quantities derived from it.

#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "gpuscale/error.hpp"

namespace gpuscale {

using Seconds = double;
using GpuCount = std::int64_t;

// How the configured batch size is shared out. per_device: every GPU runs a
// full batch (global batch b * n). global: b is split across the GPUs.
enum class BatchMode { per_device, global };

struct WorkloadSpec {
  std::string name;
  std::uint64_t param_count = 1;
  std::uint32_t bytes_per_param = 4;
  std::uint64_t dataset_size = 1;
  std::uint64_t batch_size_per_device = 128;
  Seconds compute_time_per_sample = 1e-3;
  std::uint32_t epochs = 1;
  BatchMode batch_mode = BatchMode::per_device;
};

inline void validate(const WorkloadSpec& w) {
  const std::string where = "workload '" + w.name + "': ";
  if (w.param_count < 1) throw validation_error(where + "param_count must be >= 1");
  if (w.dataset_size < 1) throw validation_error(where + "dataset_size must be >= 1");
  if (w.batch_size_per_device < 1)
    throw validation_error(where + "batch_size_per_device must be >= 1");
  if (w.epochs < 1) throw validation_error(where + "epochs must be >= 1");
  if (w.bytes_per_param != 2 && w.bytes_per_param != 4 && w.bytes_per_param != 8)
    throw validation_error(where + "bytes_per_param must be 2, 4 or 8, got " +
                           std::to_string(w.bytes_per_param));
  if (!(w.compute_time_per_sample > 0) || !std::isfinite(w.compute_time_per_sample))
    throw validation_error(where + "compute_time_per_sample must be > 0, got " +
                           std::to_string(w.compute_time_per_sample));
}

/// Bytes of gradient synchronized every data-parallel step.
inline std::uint64_t gradient_message_size(const WorkloadSpec& w) {
  return w.param_count * w.bytes_per_param;
}

struct StepCount {
  std::uint64_t steps = 1;
  // Set when drop_last floored to zero and the count was raised to one.
  bool clamped = false;
};

/// Steps needed to consume the dataset once with a global batch of b * n.
inline StepCount steps_per_epoch(const WorkloadSpec& w, GpuCount n_gpus,
                                 bool drop_last = false) {
  if (n_gpus < 1)
    throw validation_error("steps_per_epoch: n_gpus must be >= 1, got " +
                           std::to_string(n_gpus));
  const std::uint64_t global_batch =
      w.batch_mode == BatchMode::per_device
          ? w.batch_size_per_device * static_cast<std::uint64_t>(n_gpus)
          : w.batch_size_per_device;
  StepCount out;
  if (drop_last) {
    out.steps = w.dataset_size / global_batch;
    if (out.steps == 0) {
      out.steps = 1;
      out.clamped = true;
    }
  } else {
    out.steps = (w.dataset_size + global_batch - 1) / global_batch;
  }
  return out;
}

/// Forward + backward time of one local batch. In per-device mode this does
/// not depend on n; in global mode each GPU gets ceil(b / n) samples.
inline Seconds compute_time_per_step(const WorkloadSpec& w, GpuCount n_gpus = 1) {
  std::uint64_t local = w.batch_size_per_device;
  if (w.batch_mode == BatchMode::global && n_gpus > 1) {
    const auto n = static_cast<std::uint64_t>(n_gpus);
    local = (local + n - 1) / n;
  }
  return static_cast<double>(local) * w.compute_time_per_sample;
}

}  // namespace gpuscale
