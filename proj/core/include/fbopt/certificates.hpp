#pragma once

#include <vector>

#include "fbopt/controller.hpp"
#include "fbopt/model.hpp"
#include "fbopt/sampling.hpp"

namespace fbopt {

inline constexpr double kLipschitzSafety = 1.1;
inline constexpr double kLipschitzFloor = 1e-12;
inline constexpr double kXiSafety = 2.0;
inline constexpr double kXiFloor = 1.0;

/// Constants entering the step-size bound α* = 2λ_min(G) / (L + ξΣℓ_i).
struct CertificateConstants {
  /// Lipschitz constant of ∇Φ̃ on U.
  double L = 0.0;
  /// Lipschitz constants of the rows C_i∇h on U.
  Vector ell;
  /// Upper bound on the output multipliers μ_i over U.
  double xi = 0.0;
  /// Infimum of λ_min(G(u)) over U.
  double lambda_min_G = 0.0;
  double alpha_star = 0.0;

  /// Fills alpha_star from the other fields.
  static CertificateConstants make(double L, Vector ell, double xi,
                                   double lambda_min_G);
};

/// V(u) = Φ̃(u) + ξ Σ_i max{0, C_i h(u) − d_i}
double lyapunov_value(const ProblemSpec& problem, double xi, const Vector& u);

struct LipschitzEstimate {
  /// Inflated by kLipschitzSafety.
  double L = 0.0;
  Vector ell;
  /// Raw sampled maxima.
  double L_sampled = 0.0;
  Vector ell_sampled;
  int samples = 0;
};

/**
 * Largest pairwise difference quotient ‖∇Φ̃(x) − ∇Φ̃(z)‖ / ‖x − z‖ over the
 * sampled points (and the same for each row C_i∇h), times kLipschitzSafety,
 * floored at kLipschitzFloor.
 */
LipschitzEstimate estimate_lipschitz(const ProblemSpec& problem,
                                     const Sampler& sampler);

struct XiEstimate {
  double xi = 0.0;
  /// Largest output multiplier seen (sampled and supplied).
  double max_mu = 0.0;
  int samples = 0;
  /// Samples where the linearized set was empty.
  int skipped = 0;
};

/**
 * ξ = max{kXiSafety · max μ_i, kXiFloor}, with μ the output multipliers of the
 * projection QP at step size `alpha` over the sampled inputs, together with
 * any multipliers already observed along trajectories.
 */
XiEstimate estimate_xi(const ProblemSpec& problem, double alpha,
                       const Sampler& sampler, double observed_max_mu = 0.0);

/// Smallest eigenvalue of G over the sampled inputs.
double estimate_lambda_min_G(const ProblemSpec& problem, const Sampler& sampler);

/// 2λ_min(G) / (L + ξΣℓ_i). Throws InvalidArgument on non-positive constants.
double alpha_star(const CertificateConstants& constants);

/// (ℓ_i / 2)‖αw‖² for every output row.
Vector transient_violation_bound(const Vector& ell, double alpha,
                                 const Vector& w);

/**
 * Estimates every constant, with ξ probed at step size `alpha_probe`.
 */
CertificateConstants estimate_constants(const ProblemSpec& problem,
                                        double alpha_probe,
                                        const Sampler& sampler);

}  // namespace fbopt
