#include <doctest.h>

#include "fbopt/builtins.hpp"
#include "fbopt/fd_check.hpp"
#include "fbopt/model.hpp"

using namespace fbopt;

namespace {

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) {
    v(i++) = x;
  }
  return v;
}

}  // namespace

TEST_CASE("cubic plant and its Jacobian") {
  const ProblemSpec P = builtin_example();
  CHECK(eval_plant(P.plant, vec({0, 0}))(0) == doctest::Approx(0.5));
  CHECK(eval_plant(P.plant, vec({1, 1}))(0) == doctest::Approx(1.5));
  const Matrix J0 = eval_plant_jacobian(P.plant, vec({0, 0}));
  CHECK(J0(0, 0) == 1.0);
  CHECK(J0(0, 1) == -1.0);
  const Matrix J1 = eval_plant_jacobian(P.plant, vec({1, 1}));
  CHECK(J1(0, 1) == 2.0);
}

TEST_CASE("reduced cost and gradient match symbolic values") {
  const ProblemSpec P = builtin_example();
  CHECK(reduced_cost(P, vec({0, 0})) == doctest::Approx(2.0));
  CHECK(reduced_cost(P, vec({-0.5, 1})) == doctest::Approx(-1.625));
  const Vector u = vec({1, 1});
  const RowVector g = reduced_gradient(P, u, eval_plant(P.plant, u));
  CHECK(g(0) == doctest::Approx(5.0));
  CHECK(g(1) == doctest::Approx(-1.0));
  const RowVector g0 = reduced_gradient(P, vec({0, 0}), vec({0.5}));
  CHECK(g0(0) == doctest::Approx(1.0));
  CHECK(g0(1) == doctest::Approx(-4.0));
}

TEST_CASE("box encoding") {
  const ProblemSpec P = builtin_example();
  CHECK(P.input_set.rows() == 4);
  CHECK(P.output_set.rows() == 2);
  CHECK(P.input_set.is_box());
  const auto [lo, hi] = P.input_set.axis_bounds();
  CHECK(lo(0) == -1.0);
  CHECK(hi(1) == 1.0);
  CHECK(P.input_set.contains(vec({1, -1})));
  CHECK_FALSE(P.input_set.contains(vec({1.1, 0})));
}

TEST_CASE("active set and violation") {
  const Polyhedron Y = Polyhedron::box(vec({0}), vec({1}));
  CHECK(active_set(Y, vec({1})) == std::vector<int>{0});
  CHECK(active_set(Y, vec({0})) == std::vector<int>{1});
  CHECK(active_set(Y, vec({0.5})).empty());
  const Vector v = violation(Y, vec({1.25}));
  CHECK(v(0) == doctest::Approx(0.25));
  CHECK(v(1) == 0.0);
}

TEST_CASE("polyhedron rejects zero rows and mismatched sizes") {
  Matrix A = Matrix::Zero(1, 2);
  CHECK_THROWS_AS(Polyhedron(A, vec({1})), Error);
  Matrix B = Matrix::Identity(2, 2);
  try {
    Polyhedron(B, vec({1}));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
}

TEST_CASE("general polyhedron without axis rows has no axis bounds") {
  Matrix A(3, 2);
  A << 1, 1, -1, 0, 0, -1;
  const Polyhedron simplex(A, vec({1, 0, 0}));
  CHECK_FALSE(simplex.is_box());
  CHECK_THROWS_AS(simplex.axis_bounds(), Error);
}

TEST_CASE("unknown builtin") {
  try {
    make_builtin("nope");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownProblem);
  }
  for (const auto& name : builtin_names()) {
    CHECK(make_builtin(name).name == name);
  }
}

TEST_CASE("finite differences agree with analytic derivatives") {
  const ProblemSpec P = builtin_example();
  const FdReport cubic = finite_difference_check(P, random_inputs(P, 100, 1));
  CHECK(cubic.points == 100);
  CHECK(cubic.max_error() < 1e-6);

  const ProblemSpec I = make_builtin("identity_linear");
  CHECK(finite_difference_check(I, random_inputs(I, 100, 2)).max_error() <
        1e-10);
}

TEST_CASE("finite differences catch a wrong Jacobian") {
  const ProblemSpec P = builtin_example();
  PlantModel wrong{2, 1, P.plant.eval_fn(), [](const Vector& u) {
                     Matrix J(1, 2);
                     J << 1.0, 3.0 * u(1) * u(1);
                     return J;
                   }};
  const ProblemSpec broken{"broken", wrong,          P.objective,
                           P.input_set, P.output_set, P.metric};
  const FdReport report =
      finite_difference_check(broken, random_inputs(broken, 100, 3));
  CHECK(report.plant_jacobian > 1e-2);
}
