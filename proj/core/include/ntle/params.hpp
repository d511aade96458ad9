#pragma once

#include <string>

namespace ntle {

/// Parameter triple of the transmuted logistic-exponential family.
///
/// lambda is a rate (1/time), beta a dimensionless shape and delta the
/// transmutation weight. Construction validates lambda > 0, beta > 0,
/// -1 < delta < 1 and finiteness; an NtleParams value is always valid.
class NtleParams {
 public:
  NtleParams(double lambda, double beta, double delta);

  double lambda() const noexcept { return lambda_; }
  double beta() const noexcept { return beta_; }
  double delta() const noexcept { return delta_; }

  /// Logistic-exponential sub-family (delta = 0).
  static NtleParams logistic_exponential(double lambda, double beta) {
    return NtleParams(lambda, beta, 0.0);
  }
  /// Exponential sub-family (beta = 1, delta = 0).
  static NtleParams exponential(double lambda) { return NtleParams(lambda, 1.0, 0.0); }

  static bool is_valid(double lambda, double beta, double delta) noexcept;

  std::string to_string() const;

  friend bool operator==(const NtleParams&, const NtleParams&) = default;

 private:
  double lambda_;
  double beta_;
  double delta_;
};

/// The substitution variable u = (e^{lambda y} - 1)^beta. Always >= 0.
class UCoord {
 public:
  explicit UCoord(double u);
  double value() const noexcept { return u_; }

 private:
  double u_;
};

}  // namespace ntle
