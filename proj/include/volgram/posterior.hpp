#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "volgram/partition.hpp"
#include "volgram/rng.hpp"
#include "volgram/specfn.hpp"

namespace volgram {

// Shared IG(alpha, beta) prior for the per-bin diffusion levels.
struct PriorSpec {
  double alpha = 0.1;
  double beta = 0.1;
};

// Per-bin conjugate posteriors: bin k carries
// IG(alpha + m_k/2, beta + n Z_k/2), independent across bins.
struct PosteriorField {
  BinPartition part;
  std::vector<IGDist> dists;
};

// Piecewise-constant posterior mean of the diffusion coefficient with
// marginal (per-bin, not simultaneous) credible intervals.
struct DispersionEstimate {
  BinPartition part;
  std::vector<double> mean;
  std::vector<double> lower;
  std::vector<double> upper;
  double level = 0.0;
};

enum class Norm { l2, sup };

// What a theta-draw is compared against: the dispersion s (via sqrt of the
// drawn levels) or the diffusion s^2 (the levels themselves).
enum class Target { dispersion, diffusion };

PosteriorField fit(const ObservedPath& path, std::size_t bins,
                   const PriorSpec& prior);

// Closed-form posterior means; throws std::domain_error when any posterior
// shape is <= 1 (mean undefined).
std::vector<double> mean_field(const PosteriorField& post);

// Central per-bin intervals: [q((1-level)/2), q((1+level)/2)] per bin.
DispersionEstimate credible_band(const PosteriorField& post, double level);

// One joint draw: independent per-bin IG samples, in bin order.
std::vector<double> sample_field(const PosteriorField& post, Rng& rng);

// Distance between a drawn theta-field (levels of s^2 on the bins) and a
// reference truth s(t). L2 integrates the squared pointwise difference by
// per-bin quadrature; sup maximizes the absolute difference over a dense
// grid of at least 100 points per bin (plus the truth's own table nodes,
// where the sup of a piecewise-linear function actually lives).
double distance_to_truth(std::span<const double> draw,
                         const BinPartition& part, const TimeFn& truth,
                         Norm norm, Target target);

}  // namespace volgram
