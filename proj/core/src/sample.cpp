#include "ntle/sample.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ntle/error.hpp"

namespace ntle {

Sample::Sample(std::vector<double> values) : sorted_(std::move(values)) {
  if (sorted_.size() < kMinSize) {
    throw DomainError("sample needs at least " + std::to_string(kMinSize) + " observations, got " +
                      std::to_string(sorted_.size()));
  }
  for (std::size_t i = 0; i < sorted_.size(); ++i) {
    if (!std::isfinite(sorted_[i]) || !(sorted_[i] > 0.0)) {
      throw DomainError("observation " + std::to_string(i) +
                        " must be finite and > 0, got " + std::to_string(sorted_[i]));
    }
  }
  std::sort(sorted_.begin(), sorted_.end());
}

double Sample::raw_moment(int k) const noexcept {
  double sum = 0.0;
  for (double y : sorted_) sum += std::pow(y, k);
  return sum / static_cast<double>(sorted_.size());
}

}  // namespace ntle
