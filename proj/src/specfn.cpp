#include "volgram/specfn.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "volgram/errors.hpp"

namespace volgram {

namespace {

constexpr double kLogSqrt2Pi = 0.9189385332046727417803297;  // ln sqrt(2 pi)
constexpr double kPi = 3.14159265358979323846264338;

// Lanczos g = 7, nine coefficients.
constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

// Valid for x >= 0.5.
double lanczos_log_gamma(double x) {
  double acc = kLanczos[0];
  for (int i = 1; i < 9; ++i) acc += kLanczos[i] / (x - 1.0 + i);
  const double t = x + 6.5;
  return kLogSqrt2Pi + (x - 0.5) * std::log(t) - t + std::log(acc);
}

// Regularized lower incomplete gamma by its power series; for x < shape + 1.
double gamma_p_series(double shape, double x) {
  constexpr int kMaxIter = 1'000'000;
  double ap = shape;
  double del = 1.0 / shape;
  double sum = del;
  for (int i = 0; i < kMaxIter; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-17)
      return sum * std::exp(-x + shape * std::log(x) - log_gamma(shape));
  }
  throw NumericError("incomplete gamma series did not converge");
}

// Upper tail Q(shape, x) by continued fraction (modified Lentz); x >= shape+1.
double gamma_q_contfrac(double shape, double x) {
  constexpr int kMaxIter = 1'000'000;
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - shape;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    const double an = -static_cast<double>(i) * (i - shape);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16)
      return h * std::exp(-x + shape * std::log(x) - log_gamma(shape));
  }
  throw NumericError("incomplete gamma continued fraction did not converge");
}

// Inverse standard normal CDF (Acklam's rational approximation); only used
// to seed the quantile Newton iteration, which polishes to full accuracy.
double inverse_normal_cdf(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
            c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - plow) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
             c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r +
          a[5]) *
         q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_gamma: x must be positive");
  if (x < 0.5) {
    // Reflection; sin(pi x) > 0 on (0, 0.5).
    return std::log(kPi / std::sin(kPi * x)) - lanczos_log_gamma(1.0 - x);
  }
  return lanczos_log_gamma(x);
}

double digamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("digamma: x must be positive");
  double acc = 0.0;
  while (x < 6.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // ln x - 1/(2x) - sum B_2j / (2j x^(2j)), truncated after x^-12.
  const double tail =
      inv2 *
      (1.0 / 12.0 -
       inv2 * (1.0 / 120.0 -
               inv2 * (1.0 / 252.0 -
                       inv2 * (1.0 / 240.0 -
                               inv2 * (1.0 / 132.0 -
                                       inv2 * (691.0 / 32760.0))))));
  return acc + std::log(x) - 0.5 * inv - tail;
}

double gamma_cdf_reg(double shape, double x) {
  if (!(shape > 0.0))
    throw std::domain_error("gamma_cdf_reg: shape must be positive");
  if (!(x >= 0.0))
    throw std::domain_error("gamma_cdf_reg: x must be nonnegative");
  if (x == 0.0) return 0.0;
  if (x < shape + 1.0) return gamma_p_series(shape, x);
  return 1.0 - gamma_q_contfrac(shape, x);
}

double gamma_quantile_reg(double shape, double p) {
  if (!(shape > 0.0))
    throw std::domain_error("gamma_quantile_reg: shape must be positive");
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("gamma_quantile_reg: p must be in (0, 1)");

  const double lg = log_gamma(shape);
  auto pdf = [&](double x) {
    return std::exp((shape - 1.0) * std::log(x) - x - lg);
  };

  // Wilson-Hilferty start, falling back to the small-x power law.
  double x;
  {
    const double z = inverse_normal_cdf(p);
    const double t = 1.0 - 1.0 / (9.0 * shape) + z / (3.0 * std::sqrt(shape));
    x = shape * t * t * t;
    if (!(x > 0.0) || shape < 0.2)
      x = std::exp((std::log(p) + log_gamma(shape + 1.0)) / shape);
    if (!(x > 0.0) || !std::isfinite(x)) x = shape;
  }

  // Bracketed Newton on P(shape, .) - p.
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  constexpr int kMaxIter = 200;
  for (int it = 0; it < kMaxIter; ++it) {
    const double f = gamma_cdf_reg(shape, x) - p;
    if (f > 0.0)
      hi = x;
    else
      lo = x;
    if (std::abs(f) < 1e-15 && it > 0) return x;

    double next = x - f / pdf(x);
    if (!std::isfinite(next) || next <= lo || next >= hi)
      next = std::isinf(hi) ? std::max(2.0 * x, 1e-300) : 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-14 * std::max(x, 1e-280)) return next;
    x = next;
  }
  throw NumericError("gamma_quantile_reg: Newton iteration did not converge");
}

IGDist::IGDist(double shape, double scale) : shape_(shape), scale_(scale) {
  if (!(shape > 0.0) || !(scale > 0.0))
    throw std::domain_error("IGDist: shape and scale must be positive");
}

double IGDist::mean() const {
  if (!(shape_ > 1.0))
    throw std::domain_error("IGDist::mean undefined for shape <= 1");
  return scale_ / (shape_ - 1.0);
}

double IGDist::variance() const {
  if (!(shape_ > 2.0))
    throw std::domain_error("IGDist::variance undefined for shape <= 2");
  const double sm1 = shape_ - 1.0;
  return scale_ * scale_ / (sm1 * sm1 * (shape_ - 2.0));
}

double IGDist::log_pdf(double x) const {
  if (!(x > 0.0)) return -std::numeric_limits<double>::infinity();
  return shape_ * std::log(scale_) - log_gamma(shape_) -
         (shape_ + 1.0) * std::log(x) - scale_ / x;
}

double IGDist::pdf(double x) const {
  if (!(x > 0.0)) return 0.0;
  return std::exp(log_pdf(x));
}

double IGDist::cdf(double x) const {
  if (!(x > 0.0)) return 0.0;
  return 1.0 - gamma_cdf_reg(shape_, scale_ / x);
}

double IGDist::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("IGDist::quantile: p must be in (0, 1)");
  return scale_ / gamma_quantile_reg(shape_, 1.0 - p);
}

double IGDist::sample(Rng& rng) const {
  return scale_ / rng.gamma(shape_);
}

}  // namespace volgram
