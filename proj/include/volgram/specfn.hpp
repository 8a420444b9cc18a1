#pragma once

#include "volgram/rng.hpp"

namespace volgram {

// ln Gamma(x) for x > 0. Relative accuracy around 1e-13 over [1e-3, 1e8].
double log_gamma(double x);

// Digamma Psi(x) for x > 0; absolute accuracy better than 1e-12 for
// x >= 1e-3 (recurrence shift to x >= 6, then the asymptotic series).
double digamma(double x);

// Regularized lower incomplete gamma P(shape, x), monotone in x.
double gamma_cdf_reg(double shape, double x);

// Inverse of gamma_cdf_reg in x: returns q with P(shape, q) = p, solved by
// a bracketed Newton iteration on the CDF. Throws NumericError if the
// iteration cap is reached.
double gamma_quantile_reg(double shape, double p);

// Inverse gamma distribution with density proportional to
// x^-(shape+1) exp(-scale/x) on x > 0.
class IGDist {
 public:
  IGDist(double shape, double scale);

  double shape() const { return shape_; }
  double scale() const { return scale_; }

  double mean() const;      // scale/(shape-1); requires shape > 1
  double variance() const;  // requires shape > 2

  double pdf(double x) const;
  double log_pdf(double x) const;

  // Pr(X <= x) = 1 - P(shape, scale/x).
  double cdf(double x) const;
  double quantile(double p) const;

  // Draw scale / gamma-variate(shape, 1).
  double sample(Rng& rng) const;

 private:
  double shape_;
  double scale_;
};

}  // namespace volgram
