#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "support/oracles.hpp"
#include "volgram/experiments.hpp"
#include "volgram/rng.hpp"

using namespace volgram;

namespace {

ContractionConfig small_config() {
  ContractionConfig cfg;
  cfg.dispersion = make_constant_dispersion(1.0);
  cfg.drift = make_zero_drift();
  cfg.lambda = 1.0;
  cfg.n_list = {500, 1000};
  cfg.draws = 40;
  cfg.fine_grid_points = 10'001;
  cfg.base_seed = 314;
  return cfg;
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("bins_rule arithmetic") {
  CHECK(bins_rule(5000, 1.0, Norm::l2) == 85);
  CHECK(bins_rule(5000, 0.5, Norm::l2) == 354);
  // round(5 * (5000/ln 5000)^(1/3)) = round(5 * 8.3728...) = 42
  CHECK(bins_rule(5000, 1.0, Norm::sup) == 42);

  // Clamped into [1, n].
  CHECK(bins_rule(2, 1.0, Norm::l2) == 2);
  CHECK(bins_rule(2, 1.0, Norm::sup) == 2);

  CHECK_THROWS_AS(bins_rule(1, 1.0, Norm::l2), std::invalid_argument);
  CHECK_THROWS_AS(bins_rule(100, 0.0, Norm::l2), std::invalid_argument);
  CHECK_THROWS_AS(bins_rule(100, 1.5, Norm::l2), std::invalid_argument);
}

TEST_CASE("ols_fit recovers an exact power law") {
  std::vector<double> x, y;
  for (double n : {1000.0, 2000.0, 4000.0, 8000.0, 16000.0}) {
    x.push_back(std::log(n));
    y.push_back(std::log(3.0 * std::pow(n, -1.0 / 3.0)));
  }
  const SlopeFit fit = ols_fit(x, y);
  CHECK(fit.slope == doctest::Approx(-1.0 / 3.0).epsilon(1e-10));
  CHECK(fit.se <= 1e-10);
  CHECK(fit.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-9));
}

TEST_CASE("single n, single draw: quantile is that draw's distance") {
  ContractionConfig cfg = small_config();
  cfg.n_list = {500};
  cfg.draws = 1;
  const auto report = run_contraction(cfg, PriorSpec{0.1, 0.1});
  REQUIRE(report.rows.size() == 1);
  CHECK(report.rows[0].n == 500);
  CHECK(report.rows[0].bins == bins_rule(500, 1.0, Norm::l2));
  CHECK(report.rows[0].q > 0.0);
  CHECK(std::isnan(report.pooled.slope));
}

TEST_CASE("same seed twice gives an identical report") {
  const ContractionConfig cfg = small_config();
  const auto a = run_contraction(cfg, PriorSpec{0.1, 0.1});
  const auto b = run_contraction(cfg, PriorSpec{0.1, 0.1});
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].q == b.rows[i].q);
    CHECK(a.rows[i].bins == b.rows[i].bins);
  }
  CHECK(a.pooled.slope == b.pooled.slope);
}

TEST_CASE("results do not depend on the thread count") {
  ContractionConfig cfg = small_config();
  cfg.threads = 1;
  const auto serial = run_contraction(cfg, PriorSpec{0.1, 0.1});
  cfg.threads = 4;
  const auto threaded = run_contraction(cfg, PriorSpec{0.1, 0.1});
  for (std::size_t i = 0; i < serial.rows.size(); ++i)
    CHECK(serial.rows[i].q == threaded.rows[i].q);
}

TEST_CASE("quantile levels are monotone") {
  ContractionConfig cfg = small_config();
  cfg.quantile = 0.5;
  const auto median = run_contraction(cfg, PriorSpec{0.1, 0.1});
  cfg.quantile = 0.9;
  const auto upper = run_contraction(cfg, PriorSpec{0.1, 0.1});
  for (std::size_t i = 0; i < median.rows.size(); ++i)
    CHECK(median.rows[i].q <= upper.rows[i].q);
}

TEST_CASE("nested and fresh path modes both run deterministically") {
  ContractionConfig cfg = small_config();
  cfg.path_mode = PathMode::fresh;
  const auto a = run_contraction(cfg, PriorSpec{0.1, 0.1});
  const auto b = run_contraction(cfg, PriorSpec{0.1, 0.1});
  for (std::size_t i = 0; i < a.rows.size(); ++i)
    CHECK(a.rows[i].q == b.rows[i].q);
  // Fresh paths differ from nested subsamples of one path.
  cfg.path_mode = PathMode::nested;
  const auto nested = run_contraction(cfg, PriorSpec{0.1, 0.1});
  CHECK(a.rows[0].q != nested.rows[0].q);
}

TEST_CASE("quantile stability in the number of draws") {
  ContractionConfig cfg;
  cfg.dispersion = make_s1();
  cfg.drift = make_zero_drift();
  cfg.n_list = {2000};
  cfg.fine_grid_points = 20'001;
  cfg.base_seed = 2718;
  cfg.draws = 2000;
  const auto wide = run_contraction(cfg, PriorSpec{0.1, 0.1});
  cfg.draws = 500;
  const auto narrow = run_contraction(cfg, PriorSpec{0.1, 0.1});

  // Standard error of the 90% order statistic, density estimated from the
  // spacing of neighbouring order statistics in the 2000-draw run.
  ContractionConfig probe = cfg;
  probe.draws = 2000;
  probe.quantile = 0.9 - 22.0 / 2000.0;
  const double lo = run_contraction(probe, PriorSpec{0.1, 0.1}).rows[0].q;
  probe.quantile = 0.9 + 22.0 / 2000.0;
  const double hi = run_contraction(probe, PriorSpec{0.1, 0.1}).rows[0].q;
  const double density = (44.0 / 2000.0) / std::max(hi - lo, 1e-12);
  const double se = std::sqrt(0.9 * 0.1 / 500.0) / density;
  CHECK(std::abs(narrow.rows[0].q - wide.rows[0].q) <= 3.0 * se);
}

TEST_CASE("constant truth contracts at the parametric-in-m rate") {
  ContractionConfig cfg;
  cfg.dispersion = make_constant_dispersion(1.0);
  cfg.drift = make_zero_drift();
  cfg.lambda = 1.0;
  cfg.n_list = {5000, 10000, 20000, 40000};
  cfg.draws = 300;
  cfg.fine_grid_points = 800'001;
  cfg.base_seed = 1618;
  cfg.realisations = 2;
  const auto report = run_contraction(cfg, PriorSpec{0.1, 0.1});
  CHECK(report.pooled.slope >= -0.40);
  CHECK(report.pooled.slope <= -0.26);
}

TEST_CASE("validation failures") {
  ContractionConfig cfg = small_config();
  cfg.n_list = {};
  CHECK_THROWS_AS(run_contraction(cfg, PriorSpec{}), std::invalid_argument);
  cfg = small_config();
  cfg.n_list = {1000, 500};
  CHECK_THROWS_AS(run_contraction(cfg, PriorSpec{}), std::invalid_argument);
  cfg = small_config();
  cfg.n_list = {300};  // 10'000 % 300 != 0
  CHECK_THROWS_AS(run_contraction(cfg, PriorSpec{}), std::invalid_argument);
  cfg = small_config();
  cfg.draws = 0;
  CHECK_THROWS_AS(run_contraction(cfg, PriorSpec{}), std::invalid_argument);
}

TEST_CASE("drift robustness: shared noise, small relative deviation") {
  // n matters here: the neglected-drift bias in the first bin scales like
  // b^2/n, so the comparison needs the criterion's observation density.
  const DriftComparison cmp = drift_robustness(
      make_constant_dispersion(1.0), 16000, 40, PriorSpec{0.1, 0.1}, 606,
      0.98, 80'001);
  CHECK(cmp.max_relative_mean_diff < 0.05);
  CHECK(cmp.baseline.mean.size() == 40);
  CHECK(cmp.with_drift.mean.size() == 40);

  const DriftComparison again = drift_robustness(
      make_constant_dispersion(1.0), 16000, 40, PriorSpec{0.1, 0.1}, 606,
      0.98, 80'001);
  CHECK(cmp.baseline.mean == again.baseline.mean);
  CHECK(cmp.with_drift.mean == again.with_drift.mean);

  CHECK_THROWS_AS(
      drift_robustness(make_constant_dispersion(0.0), 16000, 40,
                       PriorSpec{0.1, 0.1}, 606, 0.98, 80'001),
      std::invalid_argument);
}

}  // TEST_SUITE
