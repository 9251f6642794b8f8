#include <doctest.h>

#include <cmath>

#include "fbopt/builtins.hpp"
#include "fbopt/certificates.hpp"

using namespace fbopt;

namespace {

Vector vec(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

Sampler grid(int k) {
  Sampler s;
  s.points_per_dim = k;
  return s;
}

}  // namespace

TEST_CASE("V equals the reduced cost on the feasible set") {
  const ProblemSpec P = builtin_example();
  CHECK(lyapunov_value(P, 10.0, vec(0, 0)) == doctest::Approx(2.0));
  CHECK(lyapunov_value(P, 10.0, vec(-0.5, 1.0)) ==
        doctest::Approx(reduced_cost(P, vec(-0.5, 1.0))));
}

TEST_CASE("V adds the weighted violation outside") {
  const ProblemSpec P = builtin_example();
  // h(1, 0) = 1.5 exceeds the upper bound by 0.5; Φ̃(1, 0) = 4.5.
  CHECK(lyapunov_value(P, 4.0, vec(1, 0)) == doctest::Approx(4.5 + 2.0));
  CHECK_THROWS_AS(lyapunov_value(P, 0.0, vec(1, 0)), Error);
}

TEST_CASE("Lipschitz estimates for the cubic example") {
  const ProblemSpec P = builtin_example();
  const LipschitzEstimate est = estimate_lipschitz(P, grid(21));
  // ∇Φ̃ is affine with Hessian [[3, 1], [1, 2]]; its largest eigenvalue bounds
  // every difference quotient.
  const double lambda_max = 3.6180339887498949;
  CHECK(est.L_sampled <= lambda_max + 1e-12);
  CHECK(est.L_sampled >= 0.95 * lambda_max);
  CHECK(est.L == doctest::Approx(kLipschitzSafety * est.L_sampled));
  // Row gradients ±(1, 3u₂² − 1) vary with rate 6|u₂| ≤ 6.
  for (int i = 0; i < 2; ++i) {
    CHECK(est.ell_sampled(i) <= 6.0 + 1e-12);
    CHECK(est.ell_sampled(i) >= 5.5);
  }
  CHECK(est.samples == 441);
}

TEST_CASE("Lipschitz floor for constant gradients") {
  const ProblemSpec I = make_builtin("identity_linear");
  const LipschitzEstimate est = estimate_lipschitz(I, grid(5));
  CHECK(est.L == kLipschitzFloor);
  CHECK(est.ell(0) == kLipschitzFloor);
}

TEST_CASE("step-size bound") {
  const CertificateConstants c =
      CertificateConstants::make(4.0, Vector::Constant(2, 6.0), 1.0, 1.0);
  CHECK(c.alpha_star == doctest::Approx(0.125));
  CertificateConstants bad = c;
  bad.xi = -1.0;
  try {
    alpha_star(bad);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidArgument);
  }
}

TEST_CASE("transient violation bound") {
  const Vector ell = Vector::Constant(2, 6.0);
  CHECK(transient_violation_bound(ell, 0.01, Vector::Zero(2)).isZero());
  const Vector b = transient_violation_bound(ell, 0.01, vec(-1.0, 4.0));
  CHECK(b(0) == doctest::Approx(0.0051));
  CHECK(b(1) == doctest::Approx(0.0051));
}

TEST_CASE("xi scales with cost and metric together") {
  const ProblemSpec P = builtin_example();
  ObjectiveSpec doubled{
      [f = P.objective](const Vector& u, const Vector& y) { return 2.0 * f(u, y); },
      [f = P.objective](const Vector& u, const Vector& y) {
        return RowVector(2.0 * f.gradient(u, y));
      }};
  const ProblemSpec D{"doubled", P.plant, doubled, P.input_set, P.output_set,
                      MetricField::constant(2.0 * Matrix::Identity(2, 2))};
  const XiEstimate a = estimate_xi(P, 0.05, grid(11));
  const XiEstimate b = estimate_xi(D, 0.05, grid(11));
  CHECK(a.max_mu > 0.0);
  CHECK(b.max_mu == doctest::Approx(2.0 * a.max_mu).epsilon(1e-8));
  CHECK(a.xi == doctest::Approx(kXiSafety * a.max_mu));
}

TEST_CASE("xi floor and observed multipliers") {
  const ProblemSpec I = make_builtin("identity_linear");
  // Inside Y = [−0.5, 0.5]² a small step never activates an output row.
  Sampler inner;
  inner.points_per_dim = 3;
  const ProblemSpec small{I.name,
                          I.plant,
                          I.objective,
                          Polyhedron::box(Vector::Constant(2, -0.1),
                                          Vector::Constant(2, 0.1)),
                          I.output_set,
                          I.metric};
  const XiEstimate floor = estimate_xi(small, 1e-3, inner);
  CHECK(floor.max_mu == 0.0);
  CHECK(floor.xi == kXiFloor);
  CHECK(estimate_xi(small, 1e-3, inner, 7.0).xi == doctest::Approx(14.0));
}

TEST_CASE("estimated constants are deterministic") {
  const ProblemSpec P = builtin_example();
  const CertificateConstants a = estimate_constants(P, 0.01, grid(11));
  const CertificateConstants b = estimate_constants(P, 0.01, grid(11));
  CHECK(a.L == b.L);
  CHECK(a.ell == b.ell);
  CHECK(a.xi == b.xi);
  CHECK(a.lambda_min_G == doctest::Approx(1.0));
  CHECK(a.alpha_star == doctest::Approx(2.0 / (a.L + a.xi * a.ell.sum())));
}
