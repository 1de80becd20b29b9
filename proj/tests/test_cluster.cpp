// Copyright 2026 The gpuscale Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "gpuscale/cluster.hpp"

using namespace gpuscale;
using Catch::Approx;

namespace {

ClusterSpec two_level(double intra_bw, double inter_bw, double intra_lat, double inter_lat) {
  ClusterSpec c;
  c.gpus_per_node = 2;
  c.intra_bandwidth = intra_bw;
  c.inter_bandwidth = inter_bw;
  c.intra_latency = intra_lat;
  c.inter_latency = inter_lat;
  c.step_overhead = 0;
  return c;
}

}  // namespace

TEST_CASE("ring all-reduce closed form") {
  CHECK(ring_allreduce_time(8400000, 4, 1e9, 0) == Approx(0.0126).epsilon(1e-12));
  CHECK(ring_allreduce_time(8400000, 1, 1e9, 1.0) == 0.0);
  CHECK(ring_allreduce_time(0, 8, 1e9, 1e-5) == Approx(1.4e-4).epsilon(1e-12));
}

TEST_CASE("ring all-reduce bounds and monotonicity") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> msg(0, 1e9), bw(1e6, 1e11), lat(0, 1e-3);
  std::uniform_int_distribution<GpuCount> parts(2, 4096);
  for (int i = 0; i < 1000; ++i) {
    const double m = msg(rng), b = bw(rng), l = lat(rng);
    const GpuCount p = parts(rng);
    const double t = ring_allreduce_time(m, p, b, l);
    CHECK(t <= 2 * m / b + 2.0 * static_cast<double>(p - 1) * l + 1e-15);
    CHECK(ring_allreduce_time(m * 1.5 + 1, p, b, l) > t);
    CHECK(ring_allreduce_time(m, p, b, l + 1e-6) > t);
  }
}

TEST_CASE("hierarchical all-reduce") {
  const auto c = two_level(1e10, 1e9, 2e-6, 3e-5);
  SECTION("single node reduces to the intra ring") {
    CHECK(allreduce_time(c, 123456, 2) == ring_allreduce_time(123456, 2, 1e10, 2e-6));
  }
  SECTION("intra stage plus inter stage") {
    const auto d = two_level(1e10, 1e9, 0, 0);
    CHECK(allreduce_time(d, 2480000, 4) == Approx(2.728e-3).epsilon(1e-12));
  }
  SECTION("one GPU needs no synchronization") { CHECK(allreduce_time(c, 1e9, 1) == 0.0); }
  SECTION("uneven node count rounds up") {
    CHECK(allreduce_time(c, 1e6, 5) ==
          Approx(ring_allreduce_time(1e6, 2, 1e10, 2e-6) + ring_allreduce_time(1e6, 3, 1e9, 3e-5)));
  }
}

TEST_CASE("hierarchical all-reduce properties") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> msg(1, 1e8), lat(0, 1e-4);
  std::uniform_int_distribution<GpuCount> g(1, 16);
  for (int trial = 0; trial < 200; ++trial) {
    ClusterSpec c = two_level(5e10, 5e9, lat(rng), lat(rng));
    c.gpus_per_node = g(rng);
    const double m = msg(rng);
    double prev = 0;
    for (GpuCount n = 1; n <= 600; ++n) {
      const double t = allreduce_time(c, m, n);
      CHECK(t >= prev);
      CHECK(allreduce_time(c, 3 * m, n) == Approx(3 * t - 2 * allreduce_time(c, 0, n)));
      prev = t;
    }
  }

  SECTION("flat cluster equals a single ring") {
    auto flat = two_level(1e9, 1e9, 1e-5, 1e-5);
    flat.gpus_per_node = 64;
    for (GpuCount n = 1; n <= 64; ++n)
      CHECK(allreduce_time(flat, 1e7, n) == ring_allreduce_time(1e7, n, 1e9, 1e-5));
  }

  SECTION("zero inter latency converges, nonzero latency grows 2*lambda per node") {
    const auto c0 = two_level(1e10, 1e9, 0, 0);
    const double m = 1e7;
    const double asymptote = ring_allreduce_time(m, 2, 1e10, 0) + 2 * m / 1e9;
    CHECK(allreduce_time(c0, m, 2000000) == Approx(asymptote).epsilon(1e-5));
    CHECK(allreduce_time(c0, m, 2000000) < asymptote);

    const auto c1 = two_level(1e10, 1e9, 0, 1e-4);
    const double a = allreduce_time(c1, 0, 2000);
    const double b = allreduce_time(c1, 0, 2002);
    CHECK(b - a == Approx(2e-4));
  }
}

TEST_CASE("cluster validation") {
  CHECK(validate(two_level(1e10, 1e9, 0, 0)).empty());
  CHECK(validate(two_level(1e8, 1e9, 0, 0)).size() == 1);
  CHECK_THROWS_AS(validate(two_level(0, 1e9, 0, 0)), Error);
  CHECK_THROWS_AS(validate(two_level(1e9, -1, 0, 0)), Error);
  CHECK_THROWS_AS(validate(two_level(1e9, 1e9, -1e-6, 0)), Error);
  auto c = two_level(1e9, 1e9, 0, 0);
  c.gpus_per_node = 0;
  CHECK_THROWS_AS(validate(c), Error);
  c = two_level(1e9, 1e9, 0, 0);
  c.step_overhead = -1;
  CHECK_THROWS_AS(validate(c), Error);
}
