#pragma once

#include <cstddef>
#include <vector>

#include "volgram/sde.hpp"

namespace volgram {

// N-bin split of the increment index range. With n = m*N + r (m = n div N,
// r = n mod N) the first N-1 bins hold m increments each and the last bin
// absorbs the remainder, holding m + r. Z[k] is the sum of squared
// increments in bin k, accumulated with compensated summation in a fixed
// left-to-right order so results do not depend on thread count.
struct BinPartition {
  std::size_t n = 0;           // number of increments
  std::size_t bins = 0;        // N
  std::size_t base_count = 0;  // m
  std::size_t remainder = 0;   // r
  double horizon = 1.0;

  std::vector<std::size_t> counts;  // m_k, k = 0..N-1
  std::vector<double> edges;        // a_0 = 0, ..., a_N = horizon
  std::vector<double> z;            // Z_k

  double width(std::size_t k) const { return edges[k + 1] - edges[k]; }
};

// Requires 1 <= N <= n. For N = n every bin holds one increment; posterior
// moments can then be undefined for small prior shapes, which the moment
// accessors report loudly.
BinPartition make_partition(const ObservedPath& path, std::size_t bins);

// Bin averages (1/|B_k|) * integral of s over B_k, adaptive quadrature at
// relative tolerance 1e-8 (piecewise-exact for tabulated handles).
std::vector<double> histogramise(const TimeFn& s, const BinPartition& part);

}  // namespace volgram
