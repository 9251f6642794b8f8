#include "fbopt/builtins.hpp"

#include <functional>
#include <map>

namespace fbopt {

namespace {

ProblemSpec cubic_2x1() {
  PlantModel plant{
      2, 1,
      [](const Vector& u) {
        Vector y(1);
        y(0) = u(1) * u(1) * u(1) + u(0) - u(1) + 0.5;
        return y;
      },
      [](const Vector& u) {
        Matrix J(1, 2);
        J << 1.0, 3.0 * u(1) * u(1) - 1.0;
        return J;
      }};

  ObjectiveSpec objective{
      [](const Vector& u, const Vector& y) {
        const double u1 = u(0);
        const double u2 = u(1);
        return 1.5 * u1 * u1 + u2 * u2 - u2 * u2 * u2 + u1 * u2 - 3.0 * u2 +
               1.5 + y(0);
      },
      [](const Vector& u, const Vector&) {
        const double u1 = u(0);
        const double u2 = u(1);
        RowVector g(3);
        g << 3.0 * u1 + u2, 2.0 * u2 - 3.0 * u2 * u2 + u1 - 3.0, 1.0;
        return g;
      }};

  return ProblemSpec{"cubic_2x1",
                     std::move(plant),
                     std::move(objective),
                     Polyhedron::box(Vector::Constant(2, -1.0),
                                     Vector::Constant(2, 1.0)),
                     Polyhedron::box(Vector::Constant(1, 0.0),
                                     Vector::Constant(1, 1.0)),
                     MetricField::identity(2)};
}

// h(u) = u, Φ(u, y) = Σ y_i.
ProblemSpec identity_linear() {
  PlantModel plant{
      2, 2, [](const Vector& u) { return u; },
      [](const Vector&) { return Matrix::Identity(2, 2); }};
  ObjectiveSpec objective{
      [](const Vector&, const Vector& y) { return y.sum(); },
      [](const Vector&, const Vector&) {
        RowVector g(4);
        g << 0.0, 0.0, 1.0, 1.0;
        return g;
      }};
  return ProblemSpec{"identity_linear",
                     std::move(plant),
                     std::move(objective),
                     Polyhedron::box(Vector::Constant(2, -1.0),
                                     Vector::Constant(2, 1.0)),
                     Polyhedron::box(Vector::Constant(2, -0.5),
                                     Vector::Constant(2, 0.5)),
                     MetricField::identity(2)};
}

// h(u) = Bu + e, Φ(u, y) = ½‖u‖² + ½‖y − t‖².
ProblemSpec affine_quadratic() {
  Matrix B(2, 2);
  B << 1.0, 0.5, -0.3, 1.0;
  Vector e(2);
  e << 0.2, -0.1;
  Vector target(2);
  target << 2.0, 1.5;

  PlantModel plant{
      2, 2, [B, e](const Vector& u) -> Vector { return B * u + e; },
      [B](const Vector&) { return B; }};
  ObjectiveSpec objective{
      [target](const Vector& u, const Vector& y) {
        return 0.5 * u.squaredNorm() + 0.5 * (y - target).squaredNorm();
      },
      [target](const Vector& u, const Vector& y) {
        RowVector g(4);
        g << u.transpose(), (y - target).transpose();
        return g;
      }};
  return ProblemSpec{"affine_quadratic",
                     std::move(plant),
                     std::move(objective),
                     Polyhedron::box(Vector::Constant(2, -1.0),
                                     Vector::Constant(2, 1.0)),
                     Polyhedron::box(Vector::Constant(2, -1.0),
                                     Vector::Constant(2, 0.8)),
                     MetricField::identity(2)};
}

const std::map<std::string, std::function<ProblemSpec()>, std::less<>>&
registry() {
  static const std::map<std::string, std::function<ProblemSpec()>,
                        std::less<>>
      entries{
          {"cubic_2x1", cubic_2x1},
          {"identity_linear", identity_linear},
          {"affine_quadratic", affine_quadratic},
      };
  return entries;
}

}  // namespace

ProblemSpec builtin_example() { return cubic_2x1(); }

std::vector<std::string> builtin_names() {
  std::vector<std::string> names;
  for (const auto& [name, _] : registry()) {
    names.push_back(name);
  }
  return names;
}

ProblemSpec make_builtin(std::string_view name) {
  const auto& entries = registry();
  auto it = entries.find(name);
  if (it == entries.end()) {
    throw Error(ErrorCode::UnknownProblem,
                "no builtin problem named '" + std::string(name) + "'");
  }
  return it->second();
}

}  // namespace fbopt
