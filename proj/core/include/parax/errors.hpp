#pragma once

#include <stdexcept>

namespace parax {

// Config file problems: bad syntax, unknown keys, invalid or missing values.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Transverse step at or below the in-lens stability limit while strict
// checking is enabled.
struct StepBoundError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Solver breakdowns and nonfinite field values during a run.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}
