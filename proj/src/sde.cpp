#include "volgram/sde.hpp"

#include <cmath>
#include <stdexcept>

#include "volgram/errors.hpp"

namespace volgram {

double TimeFn::operator()(double t) const {
  if (!tabulated()) return fn_(t);
  const std::size_t last = table_.size() - 1;
  double u = t / horizon_ * static_cast<double>(last);
  if (u <= 0.0) return table_.front();
  if (u >= static_cast<double>(last)) return table_.back();
  const std::size_t i = static_cast<std::size_t>(u);
  const double frac = u - static_cast<double>(i);
  return table_[i] + frac * (table_[i + 1] - table_[i]);
}

double bench_s1(double t) {
  const double u = 4.0 * t - 2.0;
  return 1.5 + std::sin(2.0 * u) + 2.0 * std::exp(-16.0 * u * u);
}

double bench_b1(double x) { return -10.0 * x + 20.0; }

TimeFn make_s1() {
  return TimeFn("s1", [](double t) { return bench_s1(t); });
}

TimeFn make_constant_dispersion(double value) {
  return TimeFn("const:" + std::to_string(value),
                [value](double) { return value; });
}

DriftFn make_zero_drift() {
  return DriftFn("b0", [](double, double) { return 0.0; });
}

DriftFn make_b1() {
  return DriftFn("b1", [](double, double x) { return bench_b1(x); });
}

TimeFn make_s2(const SimConfig& cfg) {
  if (cfg.fine_grid_points < 2)
    throw std::invalid_argument("make_s2: need at least two grid points");
  if (!(cfg.horizon > 0.0))
    throw std::invalid_argument("make_s2: horizon must be positive");

  const std::size_t points = cfg.fine_grid_points;
  const double dt = cfg.horizon / static_cast<double>(points - 1);
  const double sq = std::sqrt(dt);
  Rng rng(cfg.seed);

  constexpr int kMaxAttempts = 10'000;
  std::vector<double> table(points);
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    double w = 0.0;
    double min_value = 1.0;
    table[0] = 1.0;
    for (std::size_t k = 1; k < points; ++k) {
      w += sq * rng.normal();
      table[k] = w + 1.0;
      if (table[k] < min_value) min_value = table[k];
    }
    if (min_value > 0.0)
      return TimeFn("s2(seed=" + std::to_string(cfg.seed) + ")",
                    std::move(table), cfg.horizon);
  }
  throw NumericError("make_s2: no positive Wiener path within attempt cap");
}

std::vector<double> euler_simulate(const SimConfig& cfg, const DriftFn& drift,
                                   const TimeFn& dispersion) {
  if (cfg.fine_grid_points < 2)
    throw std::invalid_argument("euler_simulate: need at least two grid points");
  if (!(cfg.horizon > 0.0))
    throw std::invalid_argument("euler_simulate: horizon must be positive");

  const std::size_t points = cfg.fine_grid_points;
  const double dt = cfg.horizon / static_cast<double>(points - 1);
  const double sq = std::sqrt(dt);

  // Scan the dispersion on the grid up front; values are reused in the loop.
  std::vector<double> s(points - 1);
  for (std::size_t k = 0; k + 1 < points; ++k) {
    const double t = static_cast<double>(k) * dt;
    s[k] = dispersion(t);
    if (!std::isfinite(s[k]) || s[k] < 0.0)
      throw std::invalid_argument(
          "euler_simulate: dispersion is negative or non-finite at t=" +
          std::to_string(t));
  }

  Rng rng(cfg.seed);
  std::vector<double> path(points);
  path[0] = cfg.x0;
  double x = cfg.x0;
  for (std::size_t k = 0; k + 1 < points; ++k) {
    const double t = static_cast<double>(k) * dt;
    x += drift(t, x) * dt + s[k] * sq * rng.normal();
    if (!std::isfinite(x)) throw SimulationError(k + 1, path[k]);
    path[k + 1] = x;
  }
  return path;
}

ObservedPath subsample(const std::vector<double>& fine, std::size_t n,
                       double horizon) {
  if (fine.size() < 2)
    throw std::invalid_argument("subsample: fine path needs >= 2 points");
  if (n == 0) throw std::invalid_argument("subsample: n must be positive");
  const std::size_t fine_increments = fine.size() - 1;
  if (fine_increments % n != 0)
    throw std::invalid_argument(
        "subsample: fine increment count " + std::to_string(fine_increments) +
        " is not divisible by n=" + std::to_string(n));

  const std::size_t stride = fine_increments / n;
  ObservedPath path;
  path.horizon = horizon;
  path.values.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) path.values[i] = fine[i * stride];
  return path;
}

}  // namespace volgram
