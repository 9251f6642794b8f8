#include "fbopt/model.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace fbopt {

PlantModel::PlantModel(int input_dim, int output_dim, EvalFn eval,
                       JacobianFn jacobian)
    : input_dim_{input_dim},
      output_dim_{output_dim},
      eval_{std::move(eval)},
      jacobian_{std::move(jacobian)} {
  if (input_dim <= 0 || output_dim <= 0) {
    throw Error(ErrorCode::InvalidArgument,
                "plant dimensions must be positive");
  }
  if (!eval_ || !jacobian_) {
    throw Error(ErrorCode::InvalidArgument, "plant callbacks must be set");
  }
}

Polyhedron::Polyhedron(Matrix A, Vector b) : A_{std::move(A)}, b_{std::move(b)} {
  require_size(b_.size(), A_.rows(), "polyhedron right-hand side");
  for (Eigen::Index i = 0; i < A_.rows(); ++i) {
    if (A_.row(i).norm() == 0.0) {
      throw Error(ErrorCode::InvalidArgument,
                  "polyhedron row " + std::to_string(i) + " has zero norm");
    }
  }
  if (!A_.allFinite() || !b_.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, "polyhedron data must be finite");
  }
}

Polyhedron Polyhedron::box(const Vector& lower, const Vector& upper) {
  require_size(upper.size(), lower.size(), "box upper bound");
  if ((lower.array() > upper.array()).any()) {
    throw Error(ErrorCode::InvalidArgument, "box has lower > upper");
  }
  const auto n = lower.size();
  Matrix A(2 * n, n);
  A.topRows(n).setIdentity();
  A.bottomRows(n) = -Matrix::Identity(n, n);
  Vector b(2 * n);
  b << upper, -lower;
  Polyhedron set{std::move(A), std::move(b)};
  set.box_ = std::make_pair(lower, upper);
  return set;
}

Polyhedron Polyhedron::unconstrained(int dim) {
  return Polyhedron{Matrix(0, dim), Vector(0)};
}

std::pair<Vector, Vector> Polyhedron::axis_bounds() const {
  if (box_) {
    return *box_;
  }
  const auto n = A_.cols();
  Vector lower = Vector::Constant(n, -std::numeric_limits<double>::infinity());
  Vector upper = Vector::Constant(n, std::numeric_limits<double>::infinity());
  for (Eigen::Index i = 0; i < A_.rows(); ++i) {
    Eigen::Index nonzero = 0;
    Eigen::Index j = 0;
    for (Eigen::Index k = 0; k < n; ++k) {
      if (A_(i, k) != 0.0) {
        ++nonzero;
        j = k;
      }
    }
    if (nonzero != 1) {
      continue;
    }
    const double bound = b_(i) / A_(i, j);
    if (A_(i, j) > 0.0) {
      upper(j) = std::min(upper(j), bound);
    } else {
      lower(j) = std::max(lower(j), bound);
    }
  }
  if (!lower.allFinite() || !upper.allFinite()) {
    throw Error(ErrorCode::InvalidArgument,
                "polyhedron is not bounded by axis-aligned rows");
  }
  return {lower, upper};
}

bool Polyhedron::contains(const Vector& x, double tol) const {
  require_size(x.size(), A_.cols(), "point");
  if (A_.rows() == 0) {
    return true;
  }
  return ((A_ * x - b_).array() <= tol).all();
}

MetricField MetricField::identity(int dim) {
  return MetricField{[dim](const Vector&) -> Matrix {
    return Matrix::Identity(dim, dim);
  }};
}

MetricField MetricField::constant(Matrix G) {
  return MetricField{[G = std::move(G)](const Vector&) { return G; }};
}

ProblemSpec::ProblemSpec(std::string name, PlantModel plant,
                         ObjectiveSpec objective, Polyhedron input_set,
                         Polyhedron output_set, MetricField metric)
    : name{std::move(name)},
      plant{std::move(plant)},
      objective{std::move(objective)},
      input_set{std::move(input_set)},
      output_set{std::move(output_set)},
      metric{std::move(metric)} {
  require_size(this->input_set.dim(), this->plant.input_dim(),
               "input set dimension");
  require_size(this->output_set.dim(), this->plant.output_dim(),
               "output set dimension");
}

Vector eval_plant(const PlantModel& plant, const Vector& u) {
  require_size(u.size(), plant.input_dim(), "plant input");
  Vector y = plant.eval_fn()(u);
  require_size(y.size(), plant.output_dim(), "plant output");
  return y;
}

Matrix eval_plant_jacobian(const PlantModel& plant, const Vector& u) {
  require_size(u.size(), plant.input_dim(), "plant input");
  Matrix J = plant.jacobian_fn()(u);
  require_size(J.rows(), plant.output_dim(), "plant Jacobian rows");
  require_size(J.cols(), plant.input_dim(), "plant Jacobian columns");
  return J;
}

double reduced_cost(const ProblemSpec& problem, const Vector& u) {
  return problem.objective(u, eval_plant(problem.plant, u));
}

RowVector reduced_gradient(const ProblemSpec& problem, const Vector& u,
                           const Vector& y) {
  const int p = problem.input_dim();
  const int n = problem.output_dim();
  require_size(u.size(), p, "input");
  require_size(y.size(), n, "measured output");

  const RowVector g = problem.objective.gradient(u, y);
  require_size(g.size(), p + n, "objective gradient");

  // ∇Φ̃ = ∇_uΦ + ∇_yΦ ∇h(u)
  return g.head(p) + g.tail(n) * eval_plant_jacobian(problem.plant, u);
}

std::vector<int> active_set(const Polyhedron& set, const Vector& x,
                            double tol) {
  require_size(x.size(), set.dim(), "point");
  std::vector<int> active;
  if (set.rows() == 0) {
    return active;
  }
  const Vector slack = set.A() * x - set.b();
  for (int i = 0; i < set.rows(); ++i) {
    if (slack(i) >= -tol) {
      active.push_back(i);
    }
  }
  return active;
}

Vector violation(const Polyhedron& set, const Vector& x) {
  require_size(x.size(), set.dim(), "point");
  if (set.rows() == 0) {
    return Vector(0);
  }
  return (set.A() * x - set.b()).cwiseMax(0.0);
}

double min_eigenvalue(const Matrix& symmetric) {
  if (symmetric.rows() == 0) {
    return std::numeric_limits<double>::infinity();
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetric,
                                            Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(0);
}

}  // namespace fbopt
