#include "ntle/params.hpp"

#include <cmath>
#include <sstream>

#include "ntle/error.hpp"

namespace ntle {

bool NtleParams::is_valid(double lambda, double beta, double delta) noexcept {
  return std::isfinite(lambda) && std::isfinite(beta) && std::isfinite(delta) && lambda > 0.0 &&
         beta > 0.0 && delta > -1.0 && delta < 1.0;
}

NtleParams::NtleParams(double lambda, double beta, double delta)
    : lambda_(lambda), beta_(beta), delta_(delta) {
  if (!std::isfinite(lambda) || !(lambda > 0.0)) {
    throw DomainError("lambda must be a finite value > 0, got " + std::to_string(lambda));
  }
  if (!std::isfinite(beta) || !(beta > 0.0)) {
    throw DomainError("beta must be a finite value > 0, got " + std::to_string(beta));
  }
  if (!std::isfinite(delta) || !(delta > -1.0 && delta < 1.0)) {
    throw DomainError("delta must lie in the open interval (-1, 1), got " +
                      std::to_string(delta));
  }
}

std::string NtleParams::to_string() const {
  std::ostringstream os;
  os.precision(12);
  os << "(lambda=" << lambda_ << ", beta=" << beta_ << ", delta=" << delta_ << ")";
  return os.str();
}

UCoord::UCoord(double u) : u_(u) {
  if (std::isnan(u) || u < 0.0) {
    throw DomainError("u coordinate must be >= 0, got " + std::to_string(u));
  }
}

}  // namespace ntle
