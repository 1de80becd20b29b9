// Copyright 2026 The gpuscale Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "gpuscale/presets.hpp"
#include "gpuscale/scaling.hpp"
#include "gpuscale/simulator.hpp"

using namespace gpuscale;
using Catch::Approx;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ClusterSpec free_cluster() {
  ClusterSpec c;
  c.intra_bandwidth = kInf;
  c.inter_bandwidth = kInf;
  c.intra_latency = 0;
  c.inter_latency = 0;
  c.step_overhead = 0;
  return c;
}

// 128 * lcm(paper grid) so every grid point divides the dataset exactly.
constexpr std::uint64_t kDivisibleDataset = 128ULL * 23296ULL;

WorkloadSpec workload(std::uint64_t dataset, double c = 1e-3) {
  WorkloadSpec w;
  w.name = "w";
  w.param_count = 1000000;
  w.dataset_size = dataset;
  w.batch_size_per_device = 128;
  w.compute_time_per_sample = c;
  return w;
}

double at(const ScalingCurve& c, GpuCount n) {
  for (const auto& p : c.points)
    if (p.n_gpus == n) return p.epoch_time;
  FAIL("missing n");
  return 0;
}

}  // namespace

TEST_CASE("communication-free limit scales perfectly") {
  const auto w = workload(kDivisibleDataset);
  for (GpuCount n : presets::paper_grid()) {
    const double expected = static_cast<double>(kDivisibleDataset) /
                            static_cast<double>(128 * n) * 128 * 1e-3;
    CHECK(simulate_epoch_time(w, free_cluster(), n) == Approx(expected).epsilon(1e-14));
  }
}

TEST_CASE("single device single step is b*c + overhead") {
  auto w = workload(128, 0.01);
  ClusterSpec c = presets::reference_cluster();
  c.step_overhead = 0.25;
  CHECK(simulate_epoch_time(w, c, 1) == Approx(128 * 0.01 + 0.25).epsilon(1e-15));
}

TEST_CASE("sweep halving and grid size") {
  ExperimentSpec e;
  e.label = "perfect";
  e.workload = workload(1024);
  e.cluster = free_cluster();
  e.gpu_counts = {2, 4};
  const auto curve = sweep(e);
  REQUIRE(curve.points.size() == 2);
  CHECK(curve.points[0].n_gpus == 2);
  CHECK(curve.points[1].epoch_time == Approx(curve.points[0].epoch_time / 2).epsilon(1e-15));

  e.gpu_counts = presets::paper_grid();
  CHECK(sweep(e).points.size() == 10);
}

TEST_CASE("perfect scaling sweep fits beta = 1") {
  ExperimentSpec e;
  e.label = "perfect";
  e.workload = workload(kDivisibleDataset);
  e.cluster = free_cluster();
  e.gpu_counts = presets::paper_grid();
  const auto curve = sweep(e);
  const double product = curve.points.front().epoch_time * 2;
  for (const auto& p : curve.points)
    CHECK(p.epoch_time * static_cast<double>(p.n_gpus) == Approx(product).epsilon(1e-13));
  CHECK(fit_power_law(curve).beta == Approx(1.0).margin(1e-9));
}

TEST_CASE("find_min_time") {
  CHECK(find_min_time({"pna", {{2, 2.8}, {128, 0.76}, {256, 0.9}}}) == CurvePoint{128, 0.76});
  CHECK(find_min_time({"m", {{1, 5}, {2, 4}, {4, 3}}}) == CurvePoint{4, 3});
  CHECK(find_min_time({"tie", {{2, 1.0}, {4, 1.0}}}) == CurvePoint{2, 1.0});
  CHECK_THROWS_AS(find_min_time({"empty", {}}), Error);
}

TEST_CASE("calibrated presets land within 10% of the reference timings") {
  struct Target {
    const char* name;
    double t2;
    GpuCount n_end;
    double t_end;
  };
  // 2-GPU and largest-scale (PNA: fastest) epoch times in seconds.
  const Target targets[] = {{"dimenet", 210.0, 416, 4.0},
                            {"nnconv", 27.0, 416, 1.08},
                            {"schnet", 9.9, 416, 0.91},
                            {"pna", 2.8, 0, 0.76}};
  for (const auto& t : targets) {
    INFO(t.name);
    const auto e = presets::experiment(t.name);
    REQUIRE(e);
    const auto curve = sweep(*e);
    CHECK(std::abs(at(curve, 2) / t.t2 - 1) <= 0.10);
    if (t.n_end) CHECK(std::abs(at(curve, t.n_end) / t.t_end - 1) <= 0.10);
    else CHECK(std::abs(find_min_time(curve).epoch_time / t.t_end - 1) <= 0.10);
  }

  SECTION("DimeNet 2-GPU epoch is in [200, 220] s") {
    const double t2 = simulate_epoch_time(presets::experiment("dimenet")->workload,
                                          presets::experiment("dimenet")->cluster, 2);
    CHECK(t2 >= 200);
    CHECK(t2 <= 220);
  }

  SECTION("PNA has an interior minimum") {
    const auto pna = sweep(*presets::experiment("pna"));
    const auto best = find_min_time(pna);
    CHECK(best.n_gpus != pna.points.back().n_gpus);
    CHECK(best.n_gpus != pna.points.front().n_gpus);
    CHECK(best.n_gpus < 416);
  }

  CHECK_FALSE(presets::experiment("gcn"));
}

TEST_CASE("seeded noise is deterministic and grid-stable") {
  auto e = *presets::experiment("nnconv");
  e.noise_sigma = 0.05;
  e.seed = 1234;
  const auto a = sweep(e);
  const auto b = sweep(e);
  CHECK(a == b);  // bit-identical

  auto extended = e;
  extended.gpu_counts = {2, 3, 4, 8, 16, 32, 64, 128, 256, 364, 416};
  const auto c = sweep(extended);
  for (const auto& p : a.points) CHECK(at(c, p.n_gpus) == p.epoch_time);

  auto reseeded = e;
  reseeded.seed = 1235;
  CHECK_FALSE(sweep(reseeded) == a);

  // Noise is multiplicative around the deterministic value.
  auto quiet = e;
  quiet.noise_sigma = 0;
  const auto base = sweep(quiet);
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    const double ratio = a.points[i].epoch_time / base.points[i].epoch_time;
    CHECK(std::abs(std::log(ratio)) < 0.05 * 6);
  }
}

TEST_CASE("noise draws are standard normal") {
  // Moments over many keys; loose bounds for 20000 samples.
  double sum = 0, sum_sq = 0;
  const int count = 20000;
  for (int i = 0; i < count; ++i) {
    const double z = detail::keyed_normal(99, "moments", i + 1);
    sum += z;
    sum_sq += z * z;
  }
  const double mean = sum / count;
  const double var = sum_sq / count - mean * mean;
  CHECK(std::abs(mean) < 0.03);
  CHECK(std::abs(var - 1) < 0.05);
}

TEST_CASE("epoch time is monotone in every cost input") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.5, 2.0);
  const auto base_e = *presets::experiment("schnet");
  for (int trial = 0; trial < 50; ++trial) {
    auto w = base_e.workload;
    auto c = base_e.cluster;
    w.compute_time_per_sample *= unit(rng);
    c.inter_latency *= unit(rng);
    c.step_overhead *= unit(rng);
    c.inter_bandwidth *= unit(rng);
    for (GpuCount n : presets::paper_grid()) {
      const double t = simulate_epoch_time(w, c, n);
      auto faster = c;
      faster.inter_bandwidth *= 2;
      faster.intra_bandwidth *= 2;
      CHECK(simulate_epoch_time(w, faster, n) <= t);
      auto slower = c;
      slower.inter_latency *= 1.5;
      slower.intra_latency *= 1.5;
      CHECK(simulate_epoch_time(w, slower, n) >= t);
      slower = c;
      slower.step_overhead += 1e-3;
      CHECK(simulate_epoch_time(w, slower, n) >= t);
      auto heavier = w;
      heavier.compute_time_per_sample *= 1.1;
      CHECK(simulate_epoch_time(heavier, c, n) >= t);
      heavier = w;
      heavier.dataset_size += 5000;
      CHECK(simulate_epoch_time(heavier, c, n) >= t);
    }
  }
}

TEST_CASE("epoch time turns upward once each GPU takes a single step") {
  auto w = workload(4096, 1e-4);
  ClusterSpec c = presets::reference_cluster();
  c.inter_latency = 1e-4;
  c.step_overhead = 1e-3;
  // steps saturate at 1 from n = 32 onward
  double prev = simulate_epoch_time(w, c, 32);
  for (GpuCount n = 33; n <= 512; ++n) {
    const double t = simulate_epoch_time(w, c, n);
    CHECK(t >= prev);
    prev = t;
  }
}

TEST_CASE("experiment validation") {
  ExperimentSpec e;
  e.label = "bad";
  e.workload = workload(1000);
  e.gpu_counts = {4, 2};
  CHECK_THROWS_WITH(sweep(e), Catch::Matchers::ContainsSubstring("strictly increasing"));
  e.gpu_counts = {};
  CHECK_THROWS_AS(sweep(e), Error);
  e.gpu_counts = {0, 2};
  CHECK_THROWS_AS(sweep(e), Error);
  e.gpu_counts = {2, 4};
  e.noise_sigma = -0.1;
  CHECK_THROWS_WITH(sweep(e), Catch::Matchers::ContainsSubstring("noise_sigma"));
}
