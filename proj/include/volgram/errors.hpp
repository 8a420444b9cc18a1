#pragma once

#include <cstddef>
#include <stdexcept>

namespace volgram {

// Unusable input data: malformed CSV, missing columns, irregular times.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A numerical routine failed at runtime: iteration cap hit, quadrature did
// not converge, or a computation produced a non-finite value.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The Euler scheme produced a non-finite state; carries where it happened.
struct SimulationError : NumericError {
  SimulationError(std::size_t step_index, double last_state);

  std::size_t step;
  double state;
};

}  // namespace volgram
