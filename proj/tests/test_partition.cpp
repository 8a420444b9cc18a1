#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "support/oracles.hpp"
#include "volgram/partition.hpp"
#include "volgram/rng.hpp"

using namespace volgram;

TEST_SUITE("partition") {

TEST_CASE("layout examples") {
  {
    const auto part =
        make_partition(oracles::path_from_increments(std::vector<double>(10, 1.0)), 3);
    CHECK(part.base_count == 3);
    CHECK(part.remainder == 1);
    CHECK(part.counts == std::vector<std::size_t>{3, 3, 4});
  }
  {
    const auto part =
        make_partition(oracles::path_from_increments(std::vector<double>(8, 1.0)), 4);
    CHECK(part.base_count == 2);
    CHECK(part.remainder == 0);
    CHECK(part.counts == std::vector<std::size_t>{2, 2, 2, 2});
  }
  CHECK_THROWS_AS(
      make_partition(oracles::path_from_increments(std::vector<double>(4, 1.0)), 5),
      std::invalid_argument);
  CHECK_THROWS_AS(
      make_partition(oracles::path_from_increments(std::vector<double>(4, 1.0)), 0),
      std::invalid_argument);
}

TEST_CASE("constant path has zero bin sums") {
  ObservedPath path;
  path.values.assign(13, 2.5);
  const auto part = make_partition(path, 3);
  for (double z : part.z) CHECK(z == 0.0);
}

TEST_CASE("random (n, N) pairs reconstruct n = m N + r") {
  Rng rng(21);
  for (int trial = 0; trial < 10'000; ++trial) {
    const std::size_t n =
        1 + static_cast<std::size_t>(rng.uniform() * 4000.0);
    const std::size_t bins =
        1 + static_cast<std::size_t>(rng.uniform() * static_cast<double>(n));
    ObservedPath path;
    path.values.assign(n + 1, 0.0);
    const auto part = make_partition(path, bins);

    CHECK(part.base_count * part.bins + part.remainder == n);
    CHECK(part.base_count >= 1);
    CHECK(part.remainder < part.bins);
    std::size_t total = 0;
    for (std::size_t c : part.counts) total += c;
    CHECK(total == n);
    CHECK(part.edges.front() == 0.0);
    CHECK(part.edges.back() == path.horizon);
    for (std::size_t k = 0; k + 1 < part.edges.size(); ++k)
      CHECK(part.edges[k] < part.edges[k + 1]);

    // r < m whenever the bin count is no larger than sqrt(n), which covers
    // every (m, N) pair the m-first construction can produce.
    if (static_cast<double>(bins) <=
        std::sqrt(static_cast<double>(n)))
      CHECK(part.remainder < part.base_count);
  }
}

TEST_CASE("bin sums add up to the total squared increment sum") {
  Rng rng(22);
  std::vector<double> increments(997);
  for (double& y : increments) y = rng.normal() * 0.02;
  const auto path = oracles::path_from_increments(increments);
  const auto part = make_partition(path, 31);

  double total = 0.0;
  for (double y : increments) total += y * y;
  double from_bins = 0.0;
  for (double z : part.z) {
    CHECK(z >= 0.0);
    from_bins += z;
  }
  CHECK(from_bins == doctest::Approx(total).epsilon(1e-13));
}

TEST_CASE("histogramise: constants, linear means, s1 against Simpson") {
  ObservedPath path;
  path.values.assign(101, 0.0);
  const auto part = make_partition(path, 7);

  const auto constant =
      histogramise(make_constant_dispersion(2.25), part);
  for (double v : constant) CHECK(v == doctest::Approx(2.25).epsilon(1e-12));

  const TimeFn ramp("ramp", [](double t) { return t; });
  const auto ramp_means = histogramise(ramp, part);
  for (std::size_t k = 0; k < part.bins; ++k) {
    const double mid = 0.5 * (part.edges[k] + part.edges[k + 1]);
    CHECK(ramp_means[k] == doctest::Approx(mid).epsilon(1e-10));
  }

  ObservedPath path40;
  path40.values.assign(4001, 0.0);
  const auto part40 = make_partition(path40, 40);
  const auto s1_means = histogramise(make_s1(), part40);
  for (std::size_t k = 0; k < 40; ++k) {
    const double oracle =
        oracles::simpson([](double t) { return bench_s1(t); },
                         part40.edges[k], part40.edges[k + 1], 1e-12) /
        part40.width(k);
    CHECK(s1_means[k] == doctest::Approx(oracle).epsilon(1e-6));
  }
}

TEST_CASE("histogramise is the identity on bin-aligned step functions") {
  ObservedPath path;
  path.values.assign(61, 0.0);
  const auto part = make_partition(path, 6);
  const std::vector<double> levels = {1.0, 0.5, 2.0, 1.5, 0.25, 3.0};
  const TimeFn step("step", [&](double t) {
    for (std::size_t k = 0; k < part.bins; ++k)
      if (t < part.edges[k + 1]) return levels[k];
    return levels.back();
  });
  const auto means = histogramise(step, part);
  for (std::size_t k = 0; k < part.bins; ++k)
    CHECK(means[k] == doctest::Approx(levels[k]).epsilon(1e-8));
}

}  // TEST_SUITE
