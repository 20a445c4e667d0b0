#pragma once

#include <stdexcept>

namespace rcd {

// Floating-point failure detected at runtime (drift guard tripped, unbounded
// block subproblem, non-finite iterate).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File could not be opened, read, parsed or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rcd
