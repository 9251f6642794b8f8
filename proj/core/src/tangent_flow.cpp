#include "fbopt/tangent_flow.hpp"

#include "fbopt/controller.hpp"

namespace fbopt {

bool TangentCone::contains(const Vector& w, double tol) const {
  require_size(w.size(), rows.cols(), "direction");
  return rows.rows() == 0 || ((rows * w).array() <= tol).all();
}

TangentCone tangent_cone(const ProblemSpec& problem, const Vector& u,
                         double tol) {
  const int p = problem.input_dim();
  require_size(u.size(), p, "input");
  const Polyhedron& U = problem.input_set;
  const Polyhedron& Y = problem.output_set;
  const Vector y = eval_plant(problem.plant, u);
  if (!U.contains(u, tol) || !Y.contains(y, tol)) {
    throw Error(ErrorCode::NotFeasible,
                "tangent cone requested at an infeasible point");
  }

  TangentCone cone;
  cone.base_point = u;
  cone.active_input = active_set(U, u, tol);
  cone.active_output = active_set(Y, y, tol);
  const auto q_active = static_cast<Eigen::Index>(cone.active_input.size());
  const auto l_active = static_cast<Eigen::Index>(cone.active_output.size());
  cone.rows.resize(q_active + l_active, p);
  if (q_active > 0) {
    cone.rows.topRows(q_active) = select_rows(U.A(), cone.active_input);
  }
  if (l_active > 0) {
    cone.rows.bottomRows(l_active) =
        select_rows(Y.A(), cone.active_output) *
        eval_plant_jacobian(problem.plant, u);
  }
  return cone;
}

Vector project_tangent_cone(const TangentCone& cone, const Matrix& G,
                            const Vector& f) {
  const auto p = cone.rows.cols();
  require_size(f.size(), p, "vector field");
  require_size(G.rows(), p, "metric rows");
  // ‖w − f‖²_G = wᵀGw − 2(Gf)ᵀw + const
  QpProblem qp{G, -(G * f), cone.rows, Vector::Zero(cone.rows.rows())};
  return solve_qp(qp).w;
}

QpProblem tangent_projection_qp(const ProblemSpec& problem, const Vector& u,
                                double tol) {
  const TangentCone cone = tangent_cone(problem, u, tol);
  const Vector y = eval_plant(problem.plant, u);
  return QpProblem{problem.metric(u),
                   reduced_gradient(problem, u, y).transpose(), cone.rows,
                   Vector::Zero(cone.rows.rows())};
}

Vector projected_gradient_field(const ProblemSpec& problem, const Vector& u,
                                double tol) {
  return solve_qp(tangent_projection_qp(problem, u, tol)).w;
}

QpProblem rearranged_projection_qp(const ProblemSpec& problem, const Vector& u,
                                   double alpha, std::vector<int>* active,
                                   double tol) {
  if (!(alpha > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "step size must be positive");
  }
  const TangentCone cone = tangent_cone(problem, u, tol);
  const Polyhedron& U = problem.input_set;
  const Polyhedron& Y = problem.output_set;
  const int q = U.rows();
  const int l = Y.rows();
  const Vector y = eval_plant(problem.plant, u);

  QpProblem qp;
  qp.Q = problem.metric(u);
  qp.c = reduced_gradient(problem, u, y).transpose();
  qp.M.resize(q + l, problem.input_dim());
  qp.r.resize(q + l);
  if (q > 0) {
    qp.M.topRows(q) = U.A();
    qp.r.head(q) = (U.b() - U.A() * u) / alpha;
  }
  if (l > 0) {
    qp.M.bottomRows(l) = Y.A() * eval_plant_jacobian(problem.plant, u);
    qp.r.tail(l) = (Y.b() - Y.A() * y) / alpha;
  }

  std::vector<int> rows = cone.active_input;
  for (int i : cone.active_output) {
    rows.push_back(q + i);
  }
  for (int i : rows) {
    qp.r(i) = 0.0;
  }
  if (active) {
    *active = std::move(rows);
  }
  return qp;
}

std::vector<LimitConsistencyRow> limit_consistency(
    const ProblemSpec& problem, const Vector& u,
    const std::vector<double>& alphas, double tol) {
  const Vector projected = projected_gradient_field(problem, u, tol);
  const Vector y = eval_plant(problem.plant, u);
  std::vector<LimitConsistencyRow> table;
  table.reserve(alphas.size());
  for (double alpha : alphas) {
    const ControllerStep step = sigma_hat(problem, u, y, alpha);
    table.push_back({alpha, (step.w - projected).norm()});
  }
  return table;
}

bool is_non_increasing(const std::vector<LimitConsistencyRow>& table,
                       double slack) {
  for (size_t k = 1; k < table.size(); ++k) {
    if (table[k].deviation > table[k - 1].deviation + slack) {
      return false;
    }
  }
  return true;
}

}  // namespace fbopt
