#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ntle {

/// Validated observations, stored sorted ascending (order statistics).
/// Requires at least three values, all finite and > 0; violations throw
/// DomainError naming the offending index.
class Sample {
 public:
  explicit Sample(std::vector<double> values);

  std::span<const double> values() const noexcept { return sorted_; }
  std::size_t size() const noexcept { return sorted_.size(); }
  double operator[](std::size_t i) const { return sorted_[i]; }
  double min() const noexcept { return sorted_.front(); }
  double max() const noexcept { return sorted_.back(); }

  double mean() const noexcept { return raw_moment(1); }
  /// (1/n) sum y_i^k
  double raw_moment(int k) const noexcept;

  static constexpr std::size_t kMinSize = 3;

 private:
  std::vector<double> sorted_;
};

}  // namespace ntle
