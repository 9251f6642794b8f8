#pragma once

#include <vector>

#include "fbopt/model.hpp"
#include "fbopt/qp.hpp"

namespace fbopt {

/**
 * Tangent cone {w | A_{I_u} w ≤ 0, C_{I_h(u)} ∇h(u) w ≤ 0} of the feasible
 * set Ũ = {u ∈ U | h(u) ∈ Y} at base_point.
 */
struct TangentCone {
  /// Active input rows first, then active output rows times ∇h(u).
  Matrix rows;
  Vector base_point;
  std::vector<int> active_input;
  std::vector<int> active_output;

  bool contains(const Vector& w, double tol = 0.0) const;
};

/// Throws NotFeasible when u violates U or Y by more than `tol`.
TangentCone tangent_cone(const ProblemSpec& problem, const Vector& u,
                         double tol = kActiveTol);

/// argmin over the cone of ‖w − f‖²_G.
Vector project_tangent_cone(const TangentCone& cone, const Matrix& G,
                            const Vector& f);

/**
 * QP of the cone projection of −G⁻¹∇Φ̃(u)ᵀ, written as
 * minimize ½wᵀGw + ∇Φ̃(u)w subject to cone rows · w ≤ 0.
 */
QpProblem tangent_projection_qp(const ProblemSpec& problem, const Vector& u,
                                double tol = kActiveTol);

/// Π(u): the projected negative gradient field at u.
Vector projected_gradient_field(const ProblemSpec& problem, const Vector& u,
                                double tol = kActiveTol);

/**
 * Projection QP of the controller divided through by α, with right-hand sides
 * (b − Au)/α and (d − Ch(u))/α; rows active at u get right-hand side 0.
 * Row order matches [A; C∇h(u)]. `active` receives the active row indices.
 */
QpProblem rearranged_projection_qp(const ProblemSpec& problem, const Vector& u,
                                   double alpha, std::vector<int>* active,
                                   double tol = kActiveTol);

struct LimitConsistencyRow {
  double alpha = 0.0;
  /// ‖σ_α(u) − Π(u)‖
  double deviation = 0.0;
};

/// Deviation of the controller direction from the cone projection for each α.
std::vector<LimitConsistencyRow> limit_consistency(
    const ProblemSpec& problem, const Vector& u,
    const std::vector<double>& alphas, double tol = kActiveTol);

/// True when deviations never grow by more than `slack` as α decreases.
bool is_non_increasing(const std::vector<LimitConsistencyRow>& table,
                       double slack = 1e-10);

}  // namespace fbopt
