#pragma once

#include <string_view>

#include "ntle/params.hpp"
#include "ntle/quadrature.hpp"

// Derived quantities: entropies, moments, residual life, inequality curves,
// stress-strength reliability and stochastic ordering.
//
// Integrals over y in (0, inf) are mapped to v in (0, 1) with
// v = u/(1+u), u = (e^{lambda y} - 1)^beta, under which the probability
// element becomes g(y) dy = (1 + delta - 2 delta v) dv.

namespace ntle {

struct EntropyResult {
  double value;   ///< Shannon entropy in nats.
  double j_term;  ///< integral of (1+d-2dv) log(1 + (v/(1-v))^{1/beta}) over (0,1)
  double k_term;  ///< K_delta
};

/// H = 2 - log(beta lambda) - delta/beta - j - K_delta.
EntropyResult shannon_entropy(const NtleParams& p, const QuadratureSpec& q = {});

/// K_delta = integral over (0,1) of t log t with t = 1 + delta - 2 delta v.
/// Closed form away from 0, even power series near 0.
double k_delta(double delta);

/// Renyi entropy of integer order m >= 2 from the finite double sum of beta
/// functions. Throws PreconditionError if a beta argument is not positive.
double renyi_entropy_integer(const NtleParams& p, int m);

/// Renyi entropy of any order rho > 0, rho != 1, by quadrature. Throws
/// DivergenceError when g^rho is not integrable at the origin.
double renyi_entropy_numeric(const NtleParams& p, double rho, const QuadratureSpec& q = {});

/// E[Y^k].
double raw_moment(const NtleParams& p, int k, const QuadratureSpec& q = {});

/// E[Y^k 1{Y <= t}].
double incomplete_moment(const NtleParams& p, int k, double t, const QuadratureSpec& q = {});

/// E[Y - t | Y > t]. Throws TailOverflowError when survival(t) <= 1e-300.
double mean_residual_life(const NtleParams& p, double t, const QuadratureSpec& q = {});

/// E[t - Y | Y <= t]. Throws NumericalError when cdf(t) underflows.
double reversed_residual_life(const NtleParams& p, double t, const QuadratureSpec& q = {});

struct CurvePoint {
  double p;
  double value;
};

/// L(p) = mu_1(Q(p)) / mu.
CurvePoint lorenz_curve(const NtleParams& params, double prob, const QuadratureSpec& q = {});
/// B(p) = L(p) / p.
CurvePoint bonferroni_curve(const NtleParams& params, double prob, const QuadratureSpec& q = {});

/// P(stress < strength). Closed form 1/2 + (delta_stress - delta_strength)/6
/// when lambda and beta agree to 1e-12, otherwise the general integral.
double stress_strength(const NtleParams& strength, const NtleParams& stress,
                       const QuadratureSpec& q = {});

/// The general integral of G_stress * g_strength, always by quadrature.
double stress_strength_integral(const NtleParams& strength, const NtleParams& stress,
                                const QuadratureSpec& q = {});

enum class OrderingBasis {
  sufficient_condition,  ///< lambda1 >= lambda2 and delta1 >= delta2 (a theorem)
  numerical_evidence,    ///< dense-grid CDF comparison, not a proof
};

std::string_view to_string(OrderingBasis basis) noexcept;

struct OrderingResult {
  bool holds;
  OrderingBasis basis;
};

/// Whether Y1 <=_st Y2, i.e. G1(y) >= G2(y) for all y. Requires a common
/// beta (PreconditionError otherwise).
OrderingResult stochastically_leq(const NtleParams& p1, const NtleParams& p2);

}  // namespace ntle
