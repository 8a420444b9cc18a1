#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>

#include "volgram/errors.hpp"

namespace volgram {

namespace detail {

template <class F>
double simpson_rec(F& f, double a, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  if (!std::isfinite(flm) || !std::isfinite(frm))
    throw NumericError("quadrature failure: non-finite integrand value");
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double err = left + right - whole;
  // At the depth cap the subinterval is ~(b-a) * 2^-depth wide, so any
  // unresolved feature (an isolated jump, say) contributes a vanishing
  // amount; accept the refined estimate.
  if (std::abs(err) <= 15.0 * tol || depth <= 0)
    return left + right + err / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson integration of f over [a, b]. The tolerance is
// max(abs_tol, rel_tol * |coarse estimate|), distributed over subintervals.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double rel_tol,
                        double abs_tol = 1e-14, int max_depth = 32) {
  if (!(a <= b)) throw NumericError("quadrature interval is reversed");
  if (a == b) return 0.0;

  // Four initial panels give a usable magnitude estimate and avoid the
  // classic mirror-symmetry stall of a single panel.
  constexpr int kPanels = 4;
  const double h = (b - a) / kPanels;
  double coarse = 0.0;
  double fx[2 * kPanels + 1];
  for (int i = 0; i <= 2 * kPanels; ++i) {
    fx[i] = f(a + 0.5 * h * i);
    if (!std::isfinite(fx[i]))
      throw NumericError("quadrature failure: non-finite integrand value");
  }
  for (int p = 0; p < kPanels; ++p)
    coarse += h / 6.0 * (fx[2 * p] + 4.0 * fx[2 * p + 1] + fx[2 * p + 2]);

  const double tol = std::max(abs_tol, rel_tol * std::abs(coarse));
  double total = 0.0;
  for (int p = 0; p < kPanels; ++p) {
    const double pa = a + p * h;
    const double pb = pa + h;
    const double whole =
        h / 6.0 * (fx[2 * p] + 4.0 * fx[2 * p + 1] + fx[2 * p + 2]);
    total += detail::simpson_rec(f, pa, pb, fx[2 * p], fx[2 * p + 1],
                                 fx[2 * p + 2], whole, tol / kPanels,
                                 max_depth);
  }
  return total;
}

// Integrate f over [a, b]. When grid_step > 0 the integrand is smooth
// between consecutive multiples of grid_step (piecewise-polynomial targets
// such as linearly interpolated tables); one Simpson panel per piece is then
// exact for cubic pieces and no adaptivity is needed. Otherwise falls back
// to adaptive Simpson at the requested tolerance.
template <class F>
double integrate(F&& f, double a, double b, double rel_tol,
                 double abs_tol = 1e-14, double grid_step = 0.0) {
  if (!(grid_step > 0.0)) return adaptive_simpson(f, a, b, rel_tol, abs_tol);
  if (!(a <= b)) throw NumericError("quadrature interval is reversed");
  if (a == b) return 0.0;

  // Interior breakpoints strictly inside (a, b); endpoints that coincide
  // with a breakpoint up to rounding noise are not duplicated.
  const double eps = 1e-9 * grid_step;
  const long long j_first = static_cast<long long>(std::ceil((a + eps) / grid_step));
  const long long j_last = static_cast<long long>(std::floor((b - eps) / grid_step));

  double sum = 0.0;
  double comp = 0.0;  // Neumaier compensation
  auto add = [&](double v) {
    const double t = sum + v;
    comp += (std::abs(sum) >= std::abs(v)) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  };
  double left = a;
  double f_left = f(a);
  auto panel = [&](double right) {
    const double f_right = f(right);
    const double f_mid = f(0.5 * (left + right));
    add((right - left) / 6.0 * (f_left + 4.0 * f_mid + f_right));
    left = right;
    f_left = f_right;
  };
  for (long long j = j_first; j <= j_last; ++j)
    panel(static_cast<double>(j) * grid_step);
  if (left < b) panel(b);
  return sum + comp;
}

}  // namespace volgram
