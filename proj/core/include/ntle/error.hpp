#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace ntle {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A documented precondition of a closed-form result does not hold.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure (quadrature, root search, optimizer) failed.
/// Carries the achieved error estimate when one is available.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what,
                          double error_estimate = std::numeric_limits<double>::quiet_NaN())
      : std::runtime_error(what), error_estimate_(error_estimate) {}

  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double error_estimate_;
};

/// Survival (or CDF) underflowed to zero, so a ratio with it is undefined.
class TailOverflowError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// An improper integral is divergent for the requested parameters.
class DivergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace ntle
