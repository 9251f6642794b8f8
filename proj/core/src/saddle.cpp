#include "fbopt/saddle.hpp"

#include "fbopt/qp.hpp"

namespace fbopt {

namespace {

void validate_duals(const ProblemSpec& problem, const Vector& mu) {
  require_size(mu.size(), problem.output_rows(), "dual iterate");
}

}  // namespace

double augmented_lagrangian(const ProblemSpec& problem, const Vector& u,
                            const Vector& mu, double rho) {
  validate_duals(problem, mu);
  const Vector y = eval_plant(problem.plant, u);
  const double cost = problem.objective(u, y);
  if (problem.output_rows() == 0) {
    return cost;
  }
  const Vector g = problem.output_set.A() * y - problem.output_set.b();
  return cost + mu.dot(g) + 0.5 * rho * g.cwiseMax(0.0).squaredNorm();
}

Vector augmented_lagrangian_grad_u(const ProblemSpec& problem, const Vector& u,
                                   const Vector& mu, double rho) {
  validate_duals(problem, mu);
  const Vector y = eval_plant(problem.plant, u);
  Vector grad = reduced_gradient(problem, u, y).transpose();
  if (problem.output_rows() == 0) {
    return grad;
  }
  const Polyhedron& Y = problem.output_set;
  const Matrix CJ = Y.A() * eval_plant_jacobian(problem.plant, u);
  const Vector g = Y.A() * y - Y.b();
  grad += CJ.transpose() * (mu + rho * g.cwiseMax(0.0));
  return grad;
}

Vector augmented_lagrangian_grad_mu(const ProblemSpec& problem,
                                    const Vector& u) {
  const Vector y = eval_plant(problem.plant, u);
  if (problem.output_rows() == 0) {
    return Vector(0);
  }
  return problem.output_set.A() * y - problem.output_set.b();
}

SaddlePointState saddle_point_step(const SaddlePointState& state,
                                   const ProblemSpec& problem) {
  if (!(state.alpha > 0.0) || !(state.gamma > 0.0) || !(state.rho >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument,
                "saddle-point steps must be positive and rho non-negative");
  }
  if ((state.mu.array() < 0.0).any()) {
    throw Error(ErrorCode::InvalidArgument, "dual iterate must be >= 0");
  }
  SaddlePointState next = state;
  const Vector grad_u =
      augmented_lagrangian_grad_u(problem, state.u, state.mu, state.rho);
  next.u = project_polyhedron(problem.input_set, state.u - state.alpha * grad_u);
  next.mu = (state.mu + state.gamma * augmented_lagrangian_grad_mu(problem, state.u))
                .cwiseMax(0.0);
  return next;
}

double saddle_kkt_residual(const ProblemSpec& problem, const Vector& u,
                           const Vector& mu, double rho) {
  const Vector grad_u = augmented_lagrangian_grad_u(problem, u, mu, rho);
  double residual = (u - project_polyhedron(problem.input_set, u - grad_u)).norm();
  if (mu.size() > 0) {
    const Vector grad_mu = augmented_lagrangian_grad_mu(problem, u);
    residual += (mu - (mu + grad_mu).cwiseMax(0.0)).norm();
  }
  return residual;
}

Vector project_polyhedron(const Polyhedron& set, const Vector& x) {
  require_size(x.size(), set.dim(), "point");
  if (const auto& box = set.box_bounds()) {
    return x.cwiseMax(box->first).cwiseMin(box->second);
  }
  return project_polyhedron_qp(set, x);
}

Vector project_polyhedron_qp(const Polyhedron& set, const Vector& x) {
  require_size(x.size(), set.dim(), "point");
  const int p = set.dim();
  // ‖z − x‖² = zᵀz − 2xᵀz + const
  QpProblem qp{2.0 * Matrix::Identity(p, p), -2.0 * x, set.A(), set.b()};
  return solve_qp(qp).w;
}

}  // namespace fbopt
