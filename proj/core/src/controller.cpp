#include "fbopt/controller.hpp"

#include <cmath>

namespace fbopt {

namespace {

void require_step_size(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::InvalidArgument,
                "step size must be positive and finite");
  }
}

}  // namespace

ProjectionQp assemble_projection_qp(const ProblemSpec& problem, const Vector& u,
                                    const Vector& y, double alpha) {
  require_step_size(alpha);
  const int p = problem.input_dim();
  require_size(u.size(), p, "input");
  require_size(y.size(), problem.output_dim(), "measured output");

  const Polyhedron& U = problem.input_set;
  const Polyhedron& Y = problem.output_set;
  const int q = U.rows();
  const int l = Y.rows();

  const Matrix G = problem.metric(u);
  require_size(G.rows(), p, "metric rows");
  require_size(G.cols(), p, "metric columns");
  const RowVector grad = reduced_gradient(problem, u, y);
  const Matrix J = eval_plant_jacobian(problem.plant, u);

  ProjectionQp out;
  out.input_rows = q;
  out.output_rows = l;
  out.qp.Q = alpha * G;
  out.qp.c = alpha * grad.transpose();
  out.qp.M.resize(q + l, p);
  out.qp.r.resize(q + l);
  if (q > 0) {
    out.qp.M.topRows(q) = alpha * U.A();
    out.qp.r.head(q) = U.b() - U.A() * u;
  }
  if (l > 0) {
    out.qp.M.bottomRows(l) = alpha * (Y.A() * J);
    out.qp.r.tail(l) = Y.b() - Y.A() * y;
  }
  return out;
}

ProjectionQp assemble_input_qp(const ProblemSpec& problem, const Vector& u,
                               double alpha) {
  return assemble_projection_qp(problem, u, eval_plant(problem.plant, u),
                                alpha);
}

ControllerStep sigma_hat(const ProblemSpec& problem, const Vector& u,
                         const Vector& y, double alpha) {
  const ProjectionQp projection =
      assemble_projection_qp(problem, u, y, alpha);

  QpSolution solution;
  try {
    solution = solve_qp(projection.qp);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Infeasible) {
      throw Error(ErrorCode::LinearizedSetEmpty,
                  "linearized feasible set is empty at this input");
    }
    throw;
  }

  ControllerStep step;
  step.u = u;
  step.y = y;
  step.alpha = alpha;
  step.w = std::move(solution.w);
  step.nu = solution.multipliers.head(projection.input_rows);
  step.mu = solution.multipliers.tail(projection.output_rows);
  step.u_next = u + alpha * step.w;
  // Q = αG, so wᵀGw = wᵀQw / α would lose bits; use G directly.
  const Matrix G = problem.metric(u);
  step.sigma_norm_G = std::sqrt(std::max(0.0, step.w.dot(G * step.w)));
  step.qp_iterations = solution.iterations;
  step.multipliers_unique = solution.multipliers_unique();
  return step;
}

ControllerStep feedback_step(const ProblemSpec& problem, const Vector& u,
                             double alpha) {
  require_size(u.size(), problem.input_dim(), "input");
  if (!problem.input_set.contains(u, kActiveTol)) {
    throw Error(ErrorCode::NotFeasible, "input lies outside U");
  }
  return sigma_hat(problem, u, eval_plant(problem.plant, u), alpha);
}

double stationarity_residual(const ControllerStep& step) {
  return step.sigma_norm_G;
}

LicqReport check_licq(const ProblemSpec& problem, const Vector& u,
                      const Vector& y, double alpha, const Vector& w,
                      double tol) {
  const ProjectionQp projection =
      assemble_projection_qp(problem, u, y, alpha);
  const QpProblem& qp = projection.qp;
  require_size(w.size(), qp.dim(), "direction");

  const double activity_tol = kActiveTol * qp_scale(qp);
  LicqReport report;
  for (int i = 0; i < qp.rows(); ++i) {
    if (std::abs(qp.M.row(i).dot(w) - qp.r(i)) <= activity_tol) {
      report.active.push_back(i);
    }
  }
  if (report.active.empty()) {
    return report;
  }
  // Undo the α scaling so the rank test sees the rows of [A; C∇h(u)].
  const Matrix rows = select_rows(qp.M, report.active) / alpha;
  report.rank = row_rank(rows, tol);
  report.holds = report.rank == static_cast<int>(report.active.size());
  return report;
}

double first_order_residual(const ProblemSpec& problem, const Vector& u,
                            const Vector& nu, const Vector& mu) {
  const Polyhedron& U = problem.input_set;
  const Polyhedron& Y = problem.output_set;
  require_size(nu.size(), U.rows(), "input multipliers");
  require_size(mu.size(), Y.rows(), "output multipliers");

  const Vector y = eval_plant(problem.plant, u);
  const Matrix J = eval_plant_jacobian(problem.plant, u);
  Vector stationarity = reduced_gradient(problem, u, y).transpose();
  double residual = 0.0;
  if (U.rows() > 0) {
    stationarity += U.A().transpose() * nu;
    const Vector slack = U.A() * u - U.b();
    residual += nu.cwiseProduct(slack).cwiseAbs().sum();
    residual += slack.cwiseMax(0.0).norm();
    residual += (-nu).cwiseMax(0.0).norm();
  }
  if (Y.rows() > 0) {
    stationarity += (Y.A() * J).transpose() * mu;
    const Vector slack = Y.A() * y - Y.b();
    residual += mu.cwiseProduct(slack).cwiseAbs().sum();
    residual += slack.cwiseMax(0.0).norm();
    residual += (-mu).cwiseMax(0.0).norm();
  }
  return residual + stationarity.norm();
}

}  // namespace fbopt
