#include "volgram/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "volgram/quadrature.hpp"

namespace volgram {

PosteriorField fit(const ObservedPath& path, std::size_t bins,
                   const PriorSpec& prior) {
  if (!(prior.alpha > 0.0) || !(prior.beta > 0.0))
    throw std::domain_error("fit: prior alpha and beta must be positive");

  PosteriorField post;
  post.part = make_partition(path, bins);
  post.dists.reserve(bins);
  const double n = static_cast<double>(post.part.n);
  for (std::size_t k = 0; k < bins; ++k) {
    const double shape =
        prior.alpha + static_cast<double>(post.part.counts[k]) / 2.0;
    const double scale = prior.beta + n * post.part.z[k] / 2.0;
    post.dists.emplace_back(shape, scale);
  }
  return post;
}

std::vector<double> mean_field(const PosteriorField& post) {
  std::vector<double> means(post.dists.size());
  for (std::size_t k = 0; k < post.dists.size(); ++k)
    means[k] = post.dists[k].mean();
  return means;
}

DispersionEstimate credible_band(const PosteriorField& post, double level) {
  if (!(level > 0.0 && level < 1.0))
    throw std::domain_error("credible_band: level must be in (0, 1)");

  DispersionEstimate est;
  est.part = post.part;
  est.level = level;
  est.mean = mean_field(post);
  est.lower.resize(post.dists.size());
  est.upper.resize(post.dists.size());
  const double tail = (1.0 - level) / 2.0;
  for (std::size_t k = 0; k < post.dists.size(); ++k) {
    est.lower[k] = post.dists[k].quantile(tail);
    est.upper[k] = post.dists[k].quantile(1.0 - tail);
  }
  return est;
}

std::vector<double> sample_field(const PosteriorField& post, Rng& rng) {
  std::vector<double> draw(post.dists.size());
  for (std::size_t k = 0; k < post.dists.size(); ++k)
    draw[k] = post.dists[k].sample(rng);
  return draw;
}

double distance_to_truth(std::span<const double> draw,
                         const BinPartition& part, const TimeFn& truth,
                         Norm norm, Target target) {
  if (draw.size() != part.bins)
    throw std::invalid_argument("distance_to_truth: draw size != bin count");
  for (double v : draw)
    if (!(v > 0.0) || !std::isfinite(v))
      throw std::invalid_argument(
          "distance_to_truth: draw values must be positive and finite");

  const double step = truth.table_step();

  if (norm == Norm::l2) {
    double total = 0.0;
    for (std::size_t k = 0; k < part.bins; ++k) {
      const double a = part.edges[k];
      const double b = part.edges[k + 1];
      double piece;
      if (target == Target::dispersion) {
        const double root = std::sqrt(draw[k]);
        piece = integrate(
            [&](double t) {
              const double d = root - truth(t);
              return d * d;
            },
            a, b, 1e-8, 1e-14, step);
      } else {
        const double level = draw[k];
        piece = integrate(
            [&](double t) {
              const double s = truth(t);
              const double d = level - s * s;
              return d * d;
            },
            a, b, 1e-8, 1e-14, step);
      }
      total += piece;
    }
    return std::sqrt(total);
  }

  // Sup norm: dense grid per bin, augmented with the truth's table nodes
  // where the extremes of a piecewise-linear function live.
  constexpr std::size_t kGridPoints = 101;
  double best = 0.0;
  for (std::size_t k = 0; k < part.bins; ++k) {
    const double a = part.edges[k];
    const double b = part.edges[k + 1];
    const double root = std::sqrt(draw[k]);
    auto diff = [&](double t) {
      const double s = truth(t);
      return target == Target::dispersion ? std::abs(root - s)
                                          : std::abs(draw[k] - s * s);
    };
    for (std::size_t j = 0; j < kGridPoints; ++j) {
      const double t =
          a + (b - a) * static_cast<double>(j) / (kGridPoints - 1);
      best = std::max(best, diff(t));
    }
    if (step > 0.0) {
      const double eps = 1e-9 * step;
      const long long j_first = static_cast<long long>(std::ceil((a + eps) / step));
      const long long j_last = static_cast<long long>(std::floor((b - eps) / step));
      for (long long j = j_first; j <= j_last; ++j)
        best = std::max(best, diff(static_cast<double>(j) * step));
    }
  }
  return best;
}

}  // namespace volgram
