#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "volgram/posterior.hpp"

namespace volgram {

// How the per-n observation sets are produced: nested subsamples of one
// fine path per realisation, or a freshly simulated path per n.
enum class PathMode { nested, fresh };

struct ContractionConfig {
  TimeFn dispersion;
  DriftFn drift;
  double lambda = 1.0;               // Hoelder smoothness in (0, 1]
  std::vector<std::size_t> n_list;   // increment counts, strictly increasing
  std::size_t draws = 500;           // posterior draws per n
  double quantile = 0.9;
  Norm norm = Norm::l2;
  Target target = Target::dispersion;
  std::uint64_t base_seed = 0;
  std::size_t realisations = 1;
  std::size_t fine_grid_points = 800'001;
  PathMode path_mode = PathMode::nested;
  unsigned threads = 0;  // 0 = resolve from environment
};

struct ContractionRow {
  std::size_t realisation = 0;
  std::size_t n = 0;
  std::size_t bins = 0;
  double q = 0.0;  // configured quantile of the distance draws
};

// Ordinary least squares y = intercept + slope * x.
struct SlopeFit {
  double slope = 0.0;
  double se = 0.0;
  double intercept = 0.0;
};

SlopeFit ols_fit(std::span<const double> x, std::span<const double> y);

struct ContractionReport {
  std::vector<ContractionRow> rows;       // realisation-major, n ascending
  std::vector<SlopeFit> per_realisation;  // log q vs log n (or log(n/log n))
  SlopeFit pooled;
  Norm norm = Norm::l2;
  double lambda = 1.0;
  std::uint64_t seed = 0;
};

// Bin-count rules: round(5 n^(1/(2 lambda + 1))) for the L2 norm and
// round(5 (n/log n)^(1/(2 lambda + 1))) for the sup norm, clamped to [1, n].
std::size_t bins_rule(std::size_t n, double lambda, Norm norm);

// For each realisation and each n: simulate (or reuse) a fine path,
// subsample, fit, draw posterior fields, take the configured quantile of
// their distances to the true dispersion, then regress log-quantiles on
// log n (L2) or log(n/log n) (sup). Deterministic per base_seed and
// independent of the thread count.
ContractionReport run_contraction(const ContractionConfig& cfg,
                                  const PriorSpec& prior);

struct DriftComparison {
  DispersionEstimate baseline;    // zero drift
  DispersionEstimate with_drift;  // affine drift -10x + 20
  double max_relative_mean_diff = 0.0;
};

// Same Wiener increments, with and without the affine drift; reports both
// estimates and the largest relative deviation of the posterior means
// (relative to the zero-drift estimate).
DriftComparison drift_robustness(const TimeFn& dispersion, std::size_t n,
                                 std::size_t bins, const PriorSpec& prior,
                                 std::uint64_t seed, double level = 0.98,
                                 std::size_t fine_grid_points = 800'001);

}  // namespace volgram
