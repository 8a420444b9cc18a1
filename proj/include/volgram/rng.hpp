#pragma once

#include <cstdint>
#include <random>

namespace volgram {

// Deterministic derivation of independent sub-stream seeds (splitmix64 mix).
// Two different stream ids on the same base give uncorrelated generators.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

// Seedable generator handed around explicitly; there is no global RNG.
// Every sampler in the library draws through an Rng owned by the caller, so
// results are reproducible and concurrent use just means one Rng per worker.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform();      // [0, 1)
  double uniform_pos();  // (0, 1)
  double normal();       // standard normal (Marsaglia polar)

  // Unit-scale gamma variate, Marsaglia-Tsang squeeze with shape boost
  // for shape < 1. Always returns a strictly positive value.
  double gamma(double shape);

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace volgram
