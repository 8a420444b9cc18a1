#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "volgram/rng.hpp"

namespace volgram {

struct SimConfig {
  std::size_t fine_grid_points = 800'001;
  double horizon = 1.0;
  double x0 = 0.0;
  std::uint64_t seed = 0;
};

// Equispaced observations X_0, ..., X_n at times i*horizon/n.
struct ObservedPath {
  std::vector<double> values;
  double horizon = 1.0;

  std::size_t increments() const {
    return values.empty() ? 0 : values.size() - 1;
  }
};

// Time-dependent dispersion s(t): either an analytic callable on
// [0, horizon], or a table of equispaced values interpolated linearly.
// Tabulated handles expose their node spacing so quadrature can integrate
// them piecewise-exactly instead of chasing the kinks adaptively.
class TimeFn {
 public:
  TimeFn() = default;
  TimeFn(std::string id, std::function<double(double)> fn)
      : id_(std::move(id)), fn_(std::move(fn)) {}
  TimeFn(std::string id, std::vector<double> table, double horizon)
      : id_(std::move(id)), table_(std::move(table)), horizon_(horizon) {}

  const std::string& id() const { return id_; }
  bool tabulated() const { return !table_.empty(); }
  const std::vector<double>& table() const { return table_; }
  double horizon() const { return horizon_; }

  // Node spacing of the table, 0 for analytic handles.
  double table_step() const {
    return tabulated() ? horizon_ / static_cast<double>(table_.size() - 1)
                       : 0.0;
  }

  double operator()(double t) const;

 private:
  std::string id_;
  std::function<double(double)> fn_;
  std::vector<double> table_;
  double horizon_ = 1.0;
};

// Drift b(t, x).
class DriftFn {
 public:
  DriftFn() = default;
  DriftFn(std::string id, std::function<double(double, double)> fn)
      : id_(std::move(id)), fn_(std::move(fn)) {}

  const std::string& id() const { return id_; }
  double operator()(double t, double x) const { return fn_(t, x); }

 private:
  std::string id_;
  std::function<double(double, double)> fn_;
};

// Benchmark coefficients.
double bench_s1(double t);  // 3/2 + sin(2(4t-2)) + 2 exp(-16 (4t-2)^2)
double bench_b1(double x);  // -10 x + 20

TimeFn make_s1();
TimeFn make_constant_dispersion(double value);
DriftFn make_zero_drift();
DriftFn make_b1();

// Frozen Wiener path + 1 tabulated on the cfg grid, rejection-resampled
// until its minimum is strictly positive. Deterministic per cfg.seed.
TimeFn make_s2(const SimConfig& cfg);

// Euler scheme on the fine grid: X_{k+1} = X_k + b(t_k, X_k) dt
// + s(t_k) sqrt(dt) xi_k. The dispersion is scanned on the grid first and
// must be finite and nonnegative (identically zero degenerates to an ODE;
// estimation-layer entry points additionally require it to be bounded away
// from zero). Throws SimulationError if the state leaves the finite range.
std::vector<double> euler_simulate(const SimConfig& cfg, const DriftFn& drift,
                                   const TimeFn& dispersion);

// Every ((len-1)/n)-th point of a fine path, endpoints included. The fine
// increment count must be divisible by n; anything else is an error, the
// path is never interpolated.
ObservedPath subsample(const std::vector<double>& fine, std::size_t n,
                       double horizon = 1.0);

}  // namespace volgram
