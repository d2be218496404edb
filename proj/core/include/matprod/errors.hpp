#pragma once

#include <stdexcept>
#include <string>

namespace matprod {

/// Input violates a documented precondition (dimension, range, emptiness).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DimensionError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// |gx| = 0: a non-allowable matrix hit a boundary direction.
class DegenerateActionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative solver ran out of iterations. Carries the last
/// Collatz-Wielandt bracket so callers can judge how bad it was.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double lower, double upper)
      : std::runtime_error(what), lower(lower), upper(upper) {}
  double lower;
  double upper;
};

/// Malformed configuration or serialized input.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numeric failure past input validation (degenerate variance,
/// ill-conditioned fit, underflowed eigenfunction, ...).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace matprod
