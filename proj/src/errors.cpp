#include "volgram/errors.hpp"

#include <string>

namespace volgram {

namespace {

std::string simulation_message(std::size_t step_index, double last_state) {
  return "simulation produced a non-finite state at step " +
         std::to_string(step_index) + " (last state " +
         std::to_string(last_state) + ")";
}

}  // namespace

SimulationError::SimulationError(std::size_t step_index, double last_state)
    : NumericError(simulation_message(step_index, last_state)),
      step(step_index),
      state(last_state) {}

}  // namespace volgram
