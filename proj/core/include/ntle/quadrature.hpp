#pragma once

#include <functional>

namespace ntle {

/// Tolerances for adaptive quadrature. Convergence means the summed panel
/// error estimate is at most max(abs_tol, rel_tol * |integral|).
struct QuadratureSpec {
  double abs_tol = 1e-13;
  double rel_tol = 1e-11;
  int max_subdivisions = 2000;

  /// Throws DomainError unless tolerances > 0 and max_subdivisions >= 10.
  void validate() const;
};

struct QuadratureResult {
  double value;
  double error;
  int subdivisions;
};

/// Globally adaptive Gauss-Kronrod (21-point panels) on a finite interval:
/// the panel with the largest error estimate is bisected until the
/// tolerance is met. Endpoints are never evaluated, so integrable endpoint
/// singularities are allowed. Throws NumericalError (carrying the achieved
/// error estimate) if max_subdivisions is exhausted or the integrand is
/// not finite at a node.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureSpec& spec = {});

}  // namespace ntle
