#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hof {

// Base class for every diagnosable failure in the toolchain.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown by both evaluators when the step budget runs out. For the
// term rewriter `last` holds the canonical form of the last term seen;
// the circuit machine leaves it empty.
struct FuelExhausted : Error {
  FuelExhausted(std::uint64_t steps_taken, std::string last_term)
      : Error("fuel exhausted after " + std::to_string(steps_taken) + " steps"),
        steps(steps_taken),
        last(std::move(last_term)) {}

  std::uint64_t steps;
  std::string last;
};

}  // namespace hof
