#pragma once

#include "fbopt/model.hpp"

namespace fbopt {

/// Iterate of the projected primal-dual baseline.
struct SaddlePointState {
  Vector u;
  /// Dual iterate for the output rows, kept ≥ 0.
  Vector mu;
  /// Primal step.
  double alpha = 0.01;
  /// Dual step.
  double gamma = 0.5;
  /// Augmentation parameter.
  double rho = 0.0;
};

/// L(u, μ) = Φ̃(u) + μᵀ(Ch(u) − d) + (ρ/2)‖max{0, Ch(u) − d}‖²
double augmented_lagrangian(const ProblemSpec& problem, const Vector& u,
                            const Vector& mu, double rho);

/// ∇_u L as a column vector, via C∇h(u). The penalty term uses the
/// subgradient 0 exactly on the constraint boundary.
Vector augmented_lagrangian_grad_u(const ProblemSpec& problem, const Vector& u,
                                   const Vector& mu, double rho);

/// ∇_μ L = Ch(u) − d.
Vector augmented_lagrangian_grad_mu(const ProblemSpec& problem,
                                    const Vector& u);

/// u⁺ = P_U(u − α∇_u L), μ⁺ = max{0, μ + γ∇_μ L}.
SaddlePointState saddle_point_step(const SaddlePointState& state,
                                   const ProblemSpec& problem);

/**
 * Natural residual ‖u − P_U(u − ∇_u L)‖ + ‖μ − max{0, μ + ∇_μ L}‖; zero
 * exactly at KKT pairs of the input-coordinate problem.
 */
double saddle_kkt_residual(const ProblemSpec& problem, const Vector& u,
                           const Vector& mu, double rho);

/**
 * Euclidean projection onto the set: componentwise clamping for box
 * encodings, otherwise the QP min ‖z − x‖² subject to Az ≤ b.
 */
Vector project_polyhedron(const Polyhedron& set, const Vector& x);

/// QP-based projection, used for general polyhedra.
Vector project_polyhedron_qp(const Polyhedron& set, const Vector& x);

}  // namespace fbopt
