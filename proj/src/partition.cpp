#include "volgram/partition.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "volgram/quadrature.hpp"

namespace volgram {

BinPartition make_partition(const ObservedPath& path, std::size_t bins) {
  const std::size_t n = path.increments();
  if (bins < 1 || bins > n)
    throw std::invalid_argument("make_partition: need 1 <= N <= n, got N=" +
                                std::to_string(bins) +
                                ", n=" + std::to_string(n));

  BinPartition part;
  part.n = n;
  part.bins = bins;
  part.base_count = n / bins;
  part.remainder = n - part.base_count * bins;
  part.horizon = path.horizon;

  part.counts.assign(bins, part.base_count);
  part.counts.back() += part.remainder;

  part.edges.resize(bins + 1);
  part.edges[0] = 0.0;
  for (std::size_t k = 1; k < bins; ++k)
    part.edges[k] = static_cast<double>(part.base_count * k) * path.horizon /
                    static_cast<double>(n);
  part.edges[bins] = path.horizon;

  // Per-bin squared-increment sums, fixed left-to-right Neumaier summation.
  part.z.resize(bins);
  std::size_t i = 0;
  for (std::size_t k = 0; k < bins; ++k) {
    double sum = 0.0;
    double comp = 0.0;
    for (std::size_t j = 0; j < part.counts[k]; ++j, ++i) {
      const double y = path.values[i + 1] - path.values[i];
      const double v = y * y;
      const double t = sum + v;
      comp += (std::abs(sum) >= std::abs(v)) ? (sum - t) + v : (v - t) + sum;
      sum = t;
    }
    part.z[k] = sum + comp;
  }
  return part;
}

std::vector<double> histogramise(const TimeFn& s, const BinPartition& part) {
  std::vector<double> values(part.bins);
  for (std::size_t k = 0; k < part.bins; ++k) {
    const double a = part.edges[k];
    const double b = part.edges[k + 1];
    const double integral =
        integrate([&](double t) { return s(t); }, a, b, 1e-8, 1e-14,
                  s.table_step());
    values[k] = integral / (b - a);
  }
  return values;
}

}  // namespace volgram
