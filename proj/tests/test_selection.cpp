#include <doctest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "support/oracles.hpp"
#include "volgram/rng.hpp"
#include "volgram/sde.hpp"
#include "volgram/selection.hpp"

using namespace volgram;

namespace {

// Pseudo-log-likelihood at a theta field, written out directly.
double log_pseudo_lik(const BinPartition& part, const std::vector<double>& theta) {
  const double n = static_cast<double>(part.n);
  const double horizon = part.horizon;
  double acc = -0.5 * n * std::log(2.0 * M_PI) -
               0.5 * n * std::log(horizon / n);
  for (std::size_t k = 0; k < part.bins; ++k) {
    acc -= 0.5 * static_cast<double>(part.counts[k]) * std::log(theta[k]);
    acc -= n / (2.0 * horizon) * part.z[k] / theta[k];
  }
  return acc;
}

}  // namespace

TEST_SUITE("selection") {

TEST_CASE("single zero bin collapses to a closed expression") {
  ObservedPath path;
  path.values.assign(7, 1.0);  // n = 6 increments, all zero
  const PriorSpec prior{1.5, 2.0};
  const auto parts = dic_parts(path, 1, prior);

  const double expected_log_lik =
      -3.0 * std::log(2.0 * M_PI) - 3.0 * std::log(1.0 / 6.0) -
      3.0 * std::log(2.0 / 3.5);
  const double expected_nu = -6.0 * (digamma(4.5) - std::log(3.5));
  CHECK(parts.log_lik_at_mean ==
        doctest::Approx(expected_log_lik).epsilon(1e-13));
  CHECK(parts.effective_params ==
        doctest::Approx(expected_nu).epsilon(1e-13));
  CHECK(dic_score(path, 1, prior) ==
        doctest::Approx(parts.elpd()).epsilon(1e-15));
}

TEST_CASE("log-likelihood at the mean matches the direct evaluation") {
  Rng rng(91);
  std::vector<double> increments(30);
  for (double& y : increments) y = 0.2 * rng.normal();
  const auto path = oracles::path_from_increments(increments);
  const PriorSpec prior{0.4, 0.6};
  const auto parts = dic_parts(path, 3, prior);
  const auto post = fit(path, 3, prior);
  CHECK(parts.log_lik_at_mean ==
        doctest::Approx(log_pseudo_lik(post.part, mean_field(post)))
            .epsilon(1e-12));
}

TEST_CASE("effective parameter count matches its Monte Carlo definition") {
  Rng data_rng(92);
  for (double horizon : {1.0, 2.0}) {
    std::vector<double> increments(40);
    for (double& y : increments) y = 0.15 * data_rng.normal();
    const auto path = oracles::path_from_increments(increments, horizon);
    const PriorSpec prior{0.8, 0.5};
    const auto parts = dic_parts(path, 4, prior);
    const auto post = fit(path, 4, prior);
    const double log_lik_mean = log_pseudo_lik(post.part, mean_field(post));

    const std::size_t draws = 100'000;
    Rng rng(93);
    double acc = 0.0, acc2 = 0.0;
    for (std::size_t i = 0; i < draws; ++i) {
      const double ll = log_pseudo_lik(post.part, sample_field(post, rng));
      acc += ll;
      acc2 += ll * ll;
    }
    const double mean_ll = acc / static_cast<double>(draws);
    const double var_ll =
        acc2 / static_cast<double>(draws) - mean_ll * mean_ll;
    const double nu_mc = 2.0 * (log_lik_mean - mean_ll);
    const double se = 2.0 * std::sqrt(var_ll / static_cast<double>(draws));
    CHECK(std::abs(nu_mc - parts.effective_params) <= 3.0 * se);
  }
}

TEST_CASE("log_ml equals quadrature evidence on one tiny bin") {
  const std::vector<double> increments = {0.6};
  const auto path = oracles::path_from_increments(increments);
  const PriorSpec prior{0.9, 1.1};
  oracles::BinPosteriorOracle oracle(increments, 1, prior.alpha, prior.beta);
  CHECK(log_ml(path, 1, prior) ==
        doctest::Approx(oracle.log_evidence()).epsilon(1e-8));
}

TEST_CASE("log_ml is invariant under bin relabeling and reversal") {
  const std::vector<double> y = {0.1, 0.2, 0.3, 0.4, 0.1, 0.2, 0.3, 0.4};
  const auto path = oracles::path_from_increments(y);
  const PriorSpec prior{0.3, 0.7};
  const double direct = log_ml(path, 2, prior);

  // Identical (m_k, Z_k) in both bins: swapping them changes nothing.
  const std::vector<double> swapped = {0.1, 0.2, 0.3, 0.4, 0.1, 0.2, 0.3, 0.4};
  CHECK(log_ml(oracles::path_from_increments(swapped), 2, prior) ==
        doctest::Approx(direct).epsilon(1e-15));

  // Reversing the observations of a palindromic layout mirrors the bins.
  const std::vector<double> palindrome = {0.1, 0.25, -0.3, 0.4,
                                          0.4, -0.3, 0.25, 0.1};
  const auto fwd = oracles::path_from_increments(palindrome);
  std::vector<double> reversed_values(fwd.values.rbegin(),
                                      fwd.values.rend());
  ObservedPath rev;
  rev.values = reversed_values;
  CHECK(log_ml(rev, 2, prior) ==
        doctest::Approx(log_ml(fwd, 2, prior)).epsilon(1e-12));
  CHECK(dic_score(rev, 2, prior) ==
        doctest::Approx(dic_score(fwd, 2, prior)).epsilon(1e-12));
}

TEST_CASE("log_ml bin contributions are additive") {
  Rng rng(94);
  std::vector<double> increments(12);
  for (double& y : increments) y = 0.3 * rng.normal();
  std::vector<double> first_half(increments), second_half(increments);
  std::fill(first_half.begin() + 6, first_half.end(), 0.0);
  std::fill(second_half.begin(), second_half.begin() + 6, 0.0);
  const std::vector<double> zeros(12, 0.0);

  const PriorSpec prior{0.6, 0.8};
  const double whole =
      log_ml(oracles::path_from_increments(increments), 2, prior);
  const double a = log_ml(oracles::path_from_increments(first_half), 2, prior);
  const double b =
      log_ml(oracles::path_from_increments(second_half), 2, prior);
  const double shared = log_ml(oracles::path_from_increments(zeros), 2, prior);
  CHECK(whole == doctest::Approx(a + b - shared).epsilon(1e-10));
}

TEST_CASE("pick_best breaks ties toward smaller N") {
  const std::vector<std::size_t> grid = {40, 20, 80};
  const std::vector<double> scores = {1.0, 1.0, 0.5};
  CHECK(pick_best(grid, scores) == 20);
  const std::vector<double> strict = {2.0, 1.0, 0.5};
  CHECK(pick_best(grid, strict) == 40);
  CHECK_THROWS_AS(pick_best({}, {}), std::invalid_argument);
}

TEST_CASE("select: singleton grid, order equivariance, parallel scan") {
  Rng rng(95);
  std::vector<double> increments(200);
  for (double& y : increments) y = 0.1 * rng.normal();
  const auto path = oracles::path_from_increments(increments);
  const PriorSpec prior{0.5, 0.5};

  const std::vector<std::size_t> one = {8};
  const auto single = select(path, one, prior, Criterion::dic);
  CHECK(single.best == 8);
  CHECK(single.scores.size() == 1);

  const std::vector<std::size_t> grid = {4, 8, 16, 25};
  const auto result = select(path, grid, prior, Criterion::ml);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(result.scores[i] ==
          doctest::Approx(log_ml(path, grid[i], prior)).epsilon(1e-15));

  const std::vector<std::size_t> shuffled = {25, 4, 16, 8};
  const auto permuted = select(path, shuffled, prior, Criterion::ml);
  CHECK(permuted.best == result.best);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto it = std::find(shuffled.begin(), shuffled.end(), grid[i]);
    const std::size_t j =
        static_cast<std::size_t>(it - shuffled.begin());
    CHECK(permuted.scores[j] == result.scores[i]);
  }

  const auto threaded = select(path, grid, prior, Criterion::ml, 4);
  CHECK(threaded.scores == result.scores);
}

TEST_CASE("selected bin count lands near the paper's choice") {
  SimConfig cfg;
  cfg.seed = 20250810;
  const auto fine = euler_simulate(cfg, make_b1(), make_s1());
  const auto path = subsample(fine, 8000);
  const PriorSpec prior{0.1, 0.1};
  const std::vector<std::size_t> grid = {5, 10, 20, 40, 80, 160, 320};
  const auto dic = select(path, grid, prior, Criterion::dic);
  const auto ml = select(path, grid, prior, Criterion::ml);
  CHECK((dic.best == 20 || dic.best == 40 || dic.best == 80));
  CHECK((ml.best == 20 || ml.best == 40 || ml.best == 80));
}

}  // TEST_SUITE
