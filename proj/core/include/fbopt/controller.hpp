#pragma once

#include <vector>

#include "fbopt/model.hpp"
#include "fbopt/qp.hpp"

namespace fbopt {

/**
 * Projection QP of one controller step in the α-scaled form
 *
 *   minimize   ½αwᵀG(u)w + α∇Φ̃(u)w
 *   subject to αAw ≤ b − Au,  αC∇h(u)w ≤ d − Cy
 *
 * Rows [0, input_rows) are the input rows, the remaining output_rows are the
 * linearized output rows. Multipliers of this QP are (ν, μ) directly.
 */
struct ProjectionQp {
  QpProblem qp;
  int input_rows = 0;
  int output_rows = 0;
};

/// One evaluation of the feedback law u⁺ = u + α·σ̂_α(u, y).
struct ControllerStep {
  Vector u;
  Vector y;
  double alpha = 0.0;
  /// σ̂_α(u, y)
  Vector w;
  /// Input-constraint multipliers.
  Vector nu;
  /// Output-constraint multipliers.
  Vector mu;
  Vector u_next;
  /// ‖w‖_G(u)
  double sigma_norm_G = 0.0;
  int qp_iterations = 0;
  bool multipliers_unique = true;
};

ProjectionQp assemble_projection_qp(const ProblemSpec& problem, const Vector& u,
                                    const Vector& y, double alpha);

/// Same QP with y := h(u) evaluated from the plant model.
ProjectionQp assemble_input_qp(const ProblemSpec& problem, const Vector& u,
                               double alpha);

/**
 * Solves the projection QP at (u, y). Throws LinearizedSetEmpty when the
 * linearized feasible set is empty; other solver errors propagate.
 * u_next is u + αw.
 */
ControllerStep sigma_hat(const ProblemSpec& problem, const Vector& u,
                         const Vector& y, double alpha);

/// Measures y = h(u) and applies sigma_hat. Requires u ∈ U within 1e-9.
ControllerStep feedback_step(const ProblemSpec& problem, const Vector& u,
                             double alpha);

/// ‖w‖_G; zero exactly at fixed points of the feedback law.
double stationarity_residual(const ControllerStep& step);

struct LicqReport {
  bool holds = true;
  int rank = 0;
  /// Active rows of the stacked [A; C∇h(u)] at w (output rows offset by q).
  std::vector<int> active;
};

/**
 * Rank test of the active rows of [A; C∇h(u)] at w for the projection QP.
 * Activity uses the default 1e-9 tolerance relative to the QP scale; `tol`
 * is the singular-value threshold relative to the largest singular value.
 */
LicqReport check_licq(const ProblemSpec& problem, const Vector& u,
                      const Vector& y, double alpha, const Vector& w,
                      double tol = 1e-10);

/**
 * First-order optimality defect of the input-coordinate problem
 * min Φ̃(u) s.t. Au ≤ b, Ch(u) ≤ d with multipliers (ν, μ): stationarity,
 * complementarity, primal and dual feasibility, summed.
 */
double first_order_residual(const ProblemSpec& problem, const Vector& u,
                            const Vector& nu, const Vector& mu);

}  // namespace fbopt
