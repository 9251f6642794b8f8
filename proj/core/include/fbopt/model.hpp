#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fbopt/common.hpp"

namespace fbopt {

/**
 * Static steady-state input-to-output map y = h(u) together with its
 * Jacobian ∇h(u).
 */
class PlantModel {
 public:
  using EvalFn = std::function<Vector(const Vector&)>;
  using JacobianFn = std::function<Matrix(const Vector&)>;

  PlantModel(int input_dim, int output_dim, EvalFn eval, JacobianFn jacobian);

  int input_dim() const { return input_dim_; }
  int output_dim() const { return output_dim_; }

  const EvalFn& eval_fn() const { return eval_; }
  const JacobianFn& jacobian_fn() const { return jacobian_; }

 private:
  int input_dim_;
  int output_dim_;
  EvalFn eval_;
  JacobianFn jacobian_;
};

/// Polyhedron {x | Ax ≤ b}. Rows with zero norm are rejected.
class Polyhedron {
 public:
  Polyhedron(Matrix A, Vector b);

  /// Axis-aligned box lower ≤ x ≤ upper, encoded as [I; −I] x ≤ [upper; −lower].
  static Polyhedron box(const Vector& lower, const Vector& upper);

  /// Whole space of dimension `dim` (no rows).
  static Polyhedron unconstrained(int dim);

  const Matrix& A() const { return A_; }
  const Vector& b() const { return b_; }
  int rows() const { return static_cast<int>(A_.rows()); }
  int dim() const { return static_cast<int>(A_.cols()); }

  bool is_box() const { return box_.has_value(); }

  /// Box bounds if constructed through box(), otherwise nullopt.
  const std::optional<std::pair<Vector, Vector>>& box_bounds() const {
    return box_;
  }

  /**
   * Bounds recovered from rows that are multiples of ±e_j. Throws
   * InvalidArgument if some coordinate is not bounded both ways by such rows.
   */
  std::pair<Vector, Vector> axis_bounds() const;

  bool contains(const Vector& x, double tol = 0.0) const;

 private:
  Matrix A_;
  Vector b_;
  std::optional<std::pair<Vector, Vector>> box_;
};

/// Cost Φ(u, y) and its gradient as a (p+n) row vector [∇_uΦ ∇_yΦ].
class ObjectiveSpec {
 public:
  using EvalFn = std::function<double(const Vector&, const Vector&)>;
  using GradientFn = std::function<RowVector(const Vector&, const Vector&)>;

  ObjectiveSpec(EvalFn eval, GradientFn gradient)
      : eval_{std::move(eval)}, gradient_{std::move(gradient)} {}

  double operator()(const Vector& u, const Vector& y) const {
    return eval_(u, y);
  }
  RowVector gradient(const Vector& u, const Vector& y) const {
    return gradient_(u, y);
  }

 private:
  EvalFn eval_;
  GradientFn gradient_;
};

/// Position-dependent symmetric positive definite metric G(u).
class MetricField {
 public:
  using EvalFn = std::function<Matrix(const Vector&)>;

  explicit MetricField(EvalFn eval) : eval_{std::move(eval)} {}

  static MetricField identity(int dim);
  static MetricField constant(Matrix G);

  Matrix operator()(const Vector& u) const { return eval_(u); }

 private:
  EvalFn eval_;
};

/// Full instance: minimize Φ(u,y) s.t. y = h(u), u ∈ U, y ∈ Y, with metric G.
struct ProblemSpec {
  ProblemSpec(std::string name, PlantModel plant, ObjectiveSpec objective,
              Polyhedron input_set, Polyhedron output_set, MetricField metric);

  std::string name;
  PlantModel plant;
  ObjectiveSpec objective;
  Polyhedron input_set;
  Polyhedron output_set;
  MetricField metric;

  int input_dim() const { return plant.input_dim(); }
  int output_dim() const { return plant.output_dim(); }
  int output_rows() const { return output_set.rows(); }
};

Vector eval_plant(const PlantModel& plant, const Vector& u);

Matrix eval_plant_jacobian(const PlantModel& plant, const Vector& u);

/// Composed cost Φ̃(u) = Φ(u, h(u)).
double reduced_cost(const ProblemSpec& problem, const Vector& u);

/**
 * Gradient of the composed cost, ∇Φ(u,y)·[I; ∇h(u)], evaluated at the
 * measured output y.
 */
RowVector reduced_gradient(const ProblemSpec& problem, const Vector& u,
                           const Vector& y);

/// Rows i with A_i x − b_i ≥ −tol (active, or violated).
std::vector<int> active_set(const Polyhedron& set, const Vector& x,
                            double tol = kActiveTol);

/// Componentwise max{0, Ax − b}.
Vector violation(const Polyhedron& set, const Vector& x);

/// Smallest eigenvalue of a symmetric matrix.
double min_eigenvalue(const Matrix& symmetric);

}  // namespace fbopt
