// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <stdexcept>
#include <string>

namespace metamix {

inline constexpr const char* kVersion = "0.1.0";

// Invalid or inconsistent user input (bad CSV, violated precondition).
// Maps to CLI exit code 2.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical failure (non-converged quadrature, bracketing failure).
// Maps to CLI exit code 3.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Gaussian {
  double mean{0.0};
  double sd{1.0};
};

struct Interval {
  double lower{0.0};
  double upper{0.0};
  double width() const { return upper - lower; }
};

}  // namespace metamix
