#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "volgram/posterior.hpp"

namespace volgram {

enum class Criterion { dic, ml };

// The two DIC ingredients, exposed separately so the decomposition
// elpd = log_lik_at_mean - effective_params is testable term by term.
struct DicParts {
  double log_lik_at_mean = 0.0;
  double effective_params = 0.0;

  double elpd() const { return log_lik_at_mean - effective_params; }
};

// Pseudo-log-likelihood at the posterior mean and the effective number of
// parameters, in closed form. With A_k = alpha + m_k/2, B_k = beta + n Z_k/2
// and T the path horizon:
//   log L = -(n/2) log(2 pi) - (n/2) log(T/n)
//           - (1/2) sum m_k log(B_k/(A_k-1)) - (n/2T) sum Z_k (A_k-1)/B_k
//   nu    = (n/T) sum Z_k/B_k - sum m_k (Psi(A_k) - log(A_k-1))
// Requires every A_k > 1.
DicParts dic_parts(const ObservedPath& path, std::size_t bins,
                   const PriorSpec& prior);

double dic_score(const ObservedPath& path, std::size_t bins,
                 const PriorSpec& prior);

// Complete log marginal likelihood (evidence) of the bin model, including
// the (2 pi / n)^(-m_k/2) constants so values are comparable across bin
// counts and testable against direct quadrature:
//   sum_k [ -(m_k/2) log(2 pi/n) + alpha log beta - lgamma(alpha)
//           + lgamma(A_k) - A_k log B_k ]
double log_ml(const ObservedPath& path, std::size_t bins,
              const PriorSpec& prior);

struct SelectionResult {
  Criterion criterion = Criterion::dic;
  std::vector<std::size_t> grid;
  std::vector<double> scores;
  std::size_t best = 0;
};

// Argmax over grid scores; ties go to the smaller bin count.
std::size_t pick_best(std::span<const std::size_t> grid,
                      std::span<const double> scores);

// Scores every candidate bin count (grid points are independent and run in
// parallel) and picks the best. threads == 0 resolves from the environment.
SelectionResult select(const ObservedPath& path,
                       std::span<const std::size_t> grid,
                       const PriorSpec& prior, Criterion criterion,
                       unsigned threads = 0);

}  // namespace volgram
