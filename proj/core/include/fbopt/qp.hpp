#pragma once

#include <vector>

#include "fbopt/common.hpp"

namespace fbopt {

/// minimize ½wᵀQw + cᵀw subject to Mw ≤ r, with Q symmetric positive definite.
struct QpProblem {
  Matrix Q;
  Vector c;
  Matrix M;
  Vector r;

  int dim() const { return static_cast<int>(Q.rows()); }
  int rows() const { return static_cast<int>(M.rows()); }

  /// ½wᵀQw + cᵀw
  double objective(const Vector& w) const;
};

struct QpSolution {
  Vector w;
  /// One multiplier per row of M, in row order.
  Vector multipliers;
  /// Rows with |M_i w − r_i| ≤ 1e-9·scale at the returned w.
  std::vector<int> active;
  double kkt_residual = 0.0;
  int iterations = 0;
  /// The active rows at w are linearly dependent; multipliers are one valid
  /// choice among many.
  bool rank_deficient_active_set = false;

  bool multipliers_unique() const { return !rank_deficient_active_set; }
};

struct QpOptions {
  /// 0 selects 10·(p + m) + 50.
  int max_iterations = 0;
};

/// 1 + ‖c‖ + ‖r‖; every solver tolerance is relative to this.
double qp_scale(const QpProblem& qp);

/**
 * Primal active-set solver. Infeasible starts are handled by an elastic
 * phase 1 on (w, t) with rows Mw − t ≤ r, t ≥ 0 and an exact ℓ∞ penalty.
 *
 * Working-set changes use the most violating candidate with ties broken by
 * lowest row index. Deterministic for identical input.
 *
 * Throws Infeasible, NotPositiveDefinite, MaxIterations, DimensionMismatch.
 */
QpSolution solve_qp(const QpProblem& qp, const QpOptions& options = {});

/**
 * Reference solver: solves the equality-constrained KKT system of every row
 * subset with at most p rows, keeps the primal- and dual-feasible candidates,
 * and returns the one with the lowest objective. Exponential in m; meant for
 * tests with m ≲ 12.
 *
 * Throws Infeasible if no candidate qualifies.
 */
QpSolution enumerate_oracle(const QpProblem& qp);

/**
 * ‖Qw + c + Mᵀλ‖ + Σ|λ_i(M_i w − r_i)| + ‖max{0, Mw − r}‖ + ‖max{0, −λ}‖
 */
double kkt_residual(const QpProblem& qp, const Vector& w,
                    const Vector& multipliers);

/// Numerical row rank using an SVD threshold of `rel_tol`·σ_max.
int row_rank(const Matrix& rows, double rel_tol = 1e-10);

/// Rows of `M` selected by `indices`, in the given order.
Matrix select_rows(const Matrix& M, const std::vector<int>& indices);

}  // namespace fbopt
