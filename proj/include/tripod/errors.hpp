#pragma once

#include <stdexcept>

namespace tripod {

// Invalid inputs or configuration. The CLI maps this to exit code 2.
class validation_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical failure: singular denominator, divergence, non-physical state.
// The CLI maps this to exit code 3.
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tripod
