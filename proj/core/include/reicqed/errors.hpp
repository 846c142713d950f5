#pragma once

#include <stdexcept>
#include <string>

namespace reicqed {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input: malformed scenario, out-of-domain parameter, mismatched spaces.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Squeezing diverges when the parametric drive reaches the cavity detuning.
class InstabilityError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A numerical procedure could not deliver a trustworthy result.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class TruncationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class StepSizeUnderflow : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateNullSpace : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class QuadratureError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Optimum of a scan sits on the edge of the supplied grid.
class BoundaryOptimumError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace reicqed
