#include "volgram/selection.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "volgram/errors.hpp"
#include "volgram/parallel.hpp"

namespace volgram {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594;  // ln(2 pi)

}  // namespace

DicParts dic_parts(const ObservedPath& path, std::size_t bins,
                   const PriorSpec& prior) {
  const BinPartition part = make_partition(path, bins);
  const double n = static_cast<double>(part.n);
  const double horizon = part.horizon;

  double log_width_sum = 0.0;  // sum m_k log(B_k/(A_k - 1))
  double fit_sum = 0.0;        // sum Z_k (A_k - 1)/B_k
  double nu_data = 0.0;        // sum Z_k / B_k
  double nu_shape = 0.0;       // sum m_k (Psi(A_k) - log(A_k - 1))
  for (std::size_t k = 0; k < part.bins; ++k) {
    const double m_k = static_cast<double>(part.counts[k]);
    const double a_k = prior.alpha + m_k / 2.0;
    if (!(a_k > 1.0))
      throw std::domain_error(
          "dic_parts: posterior mean undefined (alpha + m_k/2 <= 1) in bin " +
          std::to_string(k));
    const double b_k = prior.beta + n * part.z[k] / 2.0;
    log_width_sum += m_k * std::log(b_k / (a_k - 1.0));
    fit_sum += part.z[k] * (a_k - 1.0) / b_k;
    nu_data += part.z[k] / b_k;
    nu_shape += m_k * (digamma(a_k) - std::log(a_k - 1.0));
  }

  DicParts parts;
  parts.log_lik_at_mean = -0.5 * n * kLog2Pi -
                          0.5 * n * std::log(horizon / n) -
                          0.5 * log_width_sum -
                          n / (2.0 * horizon) * fit_sum;
  parts.effective_params = n / horizon * nu_data - nu_shape;
  return parts;
}

double dic_score(const ObservedPath& path, std::size_t bins,
                 const PriorSpec& prior) {
  return dic_parts(path, bins, prior).elpd();
}

double log_ml(const ObservedPath& path, std::size_t bins,
              const PriorSpec& prior) {
  const BinPartition part = make_partition(path, bins);
  const double n = static_cast<double>(part.n);
  const double prior_const =
      prior.alpha * std::log(prior.beta) - log_gamma(prior.alpha);

  double total = 0.0;
  for (std::size_t k = 0; k < part.bins; ++k) {
    const double m_k = static_cast<double>(part.counts[k]);
    const double a_k = prior.alpha + m_k / 2.0;
    const double b_k = prior.beta + n * part.z[k] / 2.0;
    total += -m_k / 2.0 * (kLog2Pi - std::log(n)) + prior_const +
             log_gamma(a_k) - a_k * std::log(b_k);
  }
  return total;
}

std::size_t pick_best(std::span<const std::size_t> grid,
                      std::span<const double> scores) {
  if (grid.empty() || grid.size() != scores.size())
    throw std::invalid_argument("pick_best: grid/scores mismatch");
  std::size_t best = 0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (scores[i] > scores[best] ||
        (scores[i] == scores[best] && grid[i] < grid[best]))
      best = i;
  }
  return grid[best];
}

SelectionResult select(const ObservedPath& path,
                       std::span<const std::size_t> grid,
                       const PriorSpec& prior, Criterion criterion,
                       unsigned threads) {
  if (grid.empty()) throw std::invalid_argument("select: empty grid");

  SelectionResult result;
  result.criterion = criterion;
  result.grid.assign(grid.begin(), grid.end());
  result.scores.resize(grid.size());

  parallel_for(grid.size(), threads, [&](std::size_t i) {
    result.scores[i] = criterion == Criterion::dic
                           ? dic_score(path, grid[i], prior)
                           : log_ml(path, grid[i], prior);
  });
  for (std::size_t i = 0; i < result.scores.size(); ++i)
    if (!std::isfinite(result.scores[i]))
      throw NumericError("select: criterion score is not finite for N=" +
                         std::to_string(result.grid[i]));

  result.best = pick_best(result.grid, result.scores);
  return result;
}

}  // namespace volgram
