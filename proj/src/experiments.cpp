#include "volgram/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "volgram/parallel.hpp"

namespace volgram {

namespace {

// Order statistic at ceil(p * K) (inverse-CDF convention). The small slack
// keeps mathematically integer p*K (like 0.9 * 500) from being bumped up a
// rank by floating-point rounding.
double quantile_of(std::vector<double> values, double p) {
  std::sort(values.begin(), values.end());
  const std::size_t k = values.size();
  std::size_t idx = static_cast<std::size_t>(
      std::ceil(p * static_cast<double>(k) - 1e-9));
  if (idx < 1) idx = 1;
  if (idx > k) idx = k;
  return values[idx - 1];
}

void require_positive_on_grid(const TimeFn& dispersion, std::size_t points,
                              double horizon) {
  const double dt = horizon / static_cast<double>(points - 1);
  for (std::size_t k = 0; k < points; ++k) {
    if (!(dispersion(static_cast<double>(k) * dt) > 0.0))
      throw std::invalid_argument(
          "dispersion must be bounded away from zero on the grid");
  }
}

}  // namespace

std::size_t bins_rule(std::size_t n, double lambda, Norm norm) {
  if (n < 2) throw std::invalid_argument("bins_rule: n must be >= 2");
  if (!(lambda > 0.0 && lambda <= 1.0))
    throw std::invalid_argument("bins_rule: lambda must be in (0, 1]");

  const double nn = static_cast<double>(n);
  const double base = norm == Norm::l2 ? nn : nn / std::log(nn);
  const double raw = 5.0 * std::pow(base, 1.0 / (2.0 * lambda + 1.0));
  const long long rounded = std::llround(raw);
  const long long clamped =
      std::clamp<long long>(rounded, 1, static_cast<long long>(n));
  return static_cast<std::size_t>(clamped);
}

SlopeFit ols_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw std::invalid_argument("ols_fit: size mismatch");
  const std::size_t n = x.size();
  SlopeFit fit;
  if (n < 2) {
    fit.slope = std::numeric_limits<double>::quiet_NaN();
    fit.se = std::numeric_limits<double>::quiet_NaN();
    fit.intercept = n == 1 ? y[0] : std::numeric_limits<double>::quiet_NaN();
    return fit;
  }

  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);

  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;

  if (n > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - fit.intercept - fit.slope * x[i];
      rss += r * r;
    }
    fit.se = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
  } else {
    fit.se = 0.0;
  }
  return fit;
}

ContractionReport run_contraction(const ContractionConfig& cfg,
                                  const PriorSpec& prior) {
  if (cfg.n_list.empty())
    throw std::invalid_argument("run_contraction: empty n_list");
  for (std::size_t i = 1; i < cfg.n_list.size(); ++i)
    if (cfg.n_list[i] <= cfg.n_list[i - 1])
      throw std::invalid_argument(
          "run_contraction: n_list must be strictly increasing");
  if (!(cfg.quantile > 0.0 && cfg.quantile < 1.0))
    throw std::invalid_argument("run_contraction: quantile must be in (0, 1)");
  if (cfg.draws < 1)
    throw std::invalid_argument("run_contraction: draws must be >= 1");
  if (cfg.realisations < 1)
    throw std::invalid_argument("run_contraction: realisations must be >= 1");
  const std::size_t fine_increments = cfg.fine_grid_points - 1;
  for (std::size_t n : cfg.n_list)
    if (fine_increments % n != 0)
      throw std::invalid_argument(
          "run_contraction: fine grid increments not divisible by n=" +
          std::to_string(n));
  require_positive_on_grid(cfg.dispersion, cfg.fine_grid_points, 1.0);

  ContractionReport report;
  report.norm = cfg.norm;
  report.lambda = cfg.lambda;
  report.seed = cfg.base_seed;

  for (std::size_t r = 0; r < cfg.realisations; ++r) {
    const std::uint64_t seed_r = derive_seed(cfg.base_seed, r);

    std::vector<double> nested_fine;
    if (cfg.path_mode == PathMode::nested) {
      SimConfig sim{cfg.fine_grid_points, 1.0, 0.0, derive_seed(seed_r, 0)};
      nested_fine = euler_simulate(sim, cfg.drift, cfg.dispersion);
    }

    std::vector<double> log_n, log_q;
    for (std::size_t ni = 0; ni < cfg.n_list.size(); ++ni) {
      const std::size_t n = cfg.n_list[ni];
      ObservedPath path;
      if (cfg.path_mode == PathMode::nested) {
        path = subsample(nested_fine, n, 1.0);
      } else {
        SimConfig sim{cfg.fine_grid_points, 1.0, 0.0,
                      derive_seed(seed_r, 1 + ni)};
        path = subsample(euler_simulate(sim, cfg.drift, cfg.dispersion), n,
                         1.0);
      }

      const std::size_t bins = bins_rule(n, cfg.lambda, cfg.norm);
      const PosteriorField post = fit(path, bins, prior);
      const std::uint64_t draw_base = derive_seed(seed_r, 0x100 + ni);

      std::vector<double> distances(cfg.draws);
      parallel_for(cfg.draws, cfg.threads, [&](std::size_t k) {
        Rng rng(derive_seed(draw_base, k));
        const std::vector<double> draw = sample_field(post, rng);
        distances[k] =
            distance_to_truth(draw, post.part, cfg.dispersion, cfg.norm,
                              cfg.target);
      });

      const double q = quantile_of(std::move(distances), cfg.quantile);
      report.rows.push_back({r, n, bins, q});

      const double nn = static_cast<double>(n);
      log_n.push_back(cfg.norm == Norm::l2 ? std::log(nn)
                                           : std::log(nn / std::log(nn)));
      log_q.push_back(std::log(q));
    }
    report.per_realisation.push_back(ols_fit(log_n, log_q));
  }

  // Pooled fit across realisations.
  std::vector<double> all_x, all_y;
  for (const ContractionRow& row : report.rows) {
    const double nn = static_cast<double>(row.n);
    all_x.push_back(cfg.norm == Norm::l2 ? std::log(nn)
                                         : std::log(nn / std::log(nn)));
    all_y.push_back(std::log(row.q));
  }
  report.pooled = ols_fit(all_x, all_y);
  return report;
}

DriftComparison drift_robustness(const TimeFn& dispersion, std::size_t n,
                                 std::size_t bins, const PriorSpec& prior,
                                 std::uint64_t seed, double level,
                                 std::size_t fine_grid_points) {
  if ((fine_grid_points - 1) % n != 0)
    throw std::invalid_argument(
        "drift_robustness: fine grid increments not divisible by n");
  require_positive_on_grid(dispersion, fine_grid_points, 1.0);

  const SimConfig sim{fine_grid_points, 1.0, 0.0, seed};
  const std::vector<double> fine0 =
      euler_simulate(sim, make_zero_drift(), dispersion);
  const std::vector<double> fine1 = euler_simulate(sim, make_b1(), dispersion);

  DriftComparison cmp;
  cmp.baseline = credible_band(fit(subsample(fine0, n, 1.0), bins, prior),
                               level);
  cmp.with_drift = credible_band(fit(subsample(fine1, n, 1.0), bins, prior),
                                 level);

  double max_rel = 0.0;
  for (std::size_t k = 0; k < bins; ++k) {
    const double rel = std::abs(cmp.with_drift.mean[k] - cmp.baseline.mean[k]) /
                       cmp.baseline.mean[k];
    max_rel = std::max(max_rel, rel);
  }
  cmp.max_relative_mean_diff = max_rel;
  return cmp;
}

}  // namespace volgram
