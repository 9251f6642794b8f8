#include "fbopt/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "parallel.hpp"

namespace fbopt {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw Error(ErrorCode::InvalidArgument,
                std::string(name) + " must be positive and finite");
  }
}

}  // namespace

CertificateConstants CertificateConstants::make(double L, Vector ell,
                                                double xi,
                                                double lambda_min_G) {
  CertificateConstants constants;
  constants.L = L;
  constants.ell = std::move(ell);
  constants.xi = xi;
  constants.lambda_min_G = lambda_min_G;
  constants.alpha_star = fbopt::alpha_star(constants);
  return constants;
}

double lyapunov_value(const ProblemSpec& problem, double xi, const Vector& u) {
  require_positive(xi, "xi");
  const Vector y = eval_plant(problem.plant, u);
  const double cost = problem.objective(u, y);
  const Vector excess = violation(problem.output_set, y);
  return cost + xi * excess.sum();
}

LipschitzEstimate estimate_lipschitz(const ProblemSpec& problem,
                                     const Sampler& sampler) {
  const std::vector<Vector> points =
      sample_points(problem.input_set, sampler);
  const std::size_t N = points.size();
  const int l = problem.output_rows();
  const Matrix& C = problem.output_set.A();

  std::vector<RowVector> gradients(N);
  std::vector<Matrix> row_jacobians(N);
  for (std::size_t k = 0; k < N; ++k) {
    const Vector y = eval_plant(problem.plant, points[k]);
    gradients[k] = reduced_gradient(problem, points[k], y);
    row_jacobians[k] = C * eval_plant_jacobian(problem.plant, points[k]);
  }

  const std::size_t chunks = detail::chunk_count(N);
  std::vector<double> L_chunk(chunks, 0.0);
  std::vector<Vector> ell_chunk(chunks, Vector::Zero(l));
  detail::parallel_chunks(N, [&](std::size_t begin, std::size_t end,
                                 std::size_t chunk) {
    double L_max = 0.0;
    Vector ell_max = Vector::Zero(l);
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = i + 1; j < N; ++j) {
        const double dist = (points[i] - points[j]).norm();
        if (dist == 0.0) {
          continue;
        }
        L_max = std::max(L_max, (gradients[i] - gradients[j]).norm() / dist);
        for (int r = 0; r < l; ++r) {
          ell_max(r) = std::max(
              ell_max(r),
              (row_jacobians[i].row(r) - row_jacobians[j].row(r)).norm() /
                  dist);
        }
      }
    }
    L_chunk[chunk] = L_max;
    ell_chunk[chunk] = std::move(ell_max);
  });

  LipschitzEstimate estimate;
  estimate.samples = static_cast<int>(N);
  estimate.ell_sampled = Vector::Zero(l);
  for (std::size_t t = 0; t < chunks; ++t) {
    estimate.L_sampled = std::max(estimate.L_sampled, L_chunk[t]);
    estimate.ell_sampled = estimate.ell_sampled.cwiseMax(ell_chunk[t]);
  }
  estimate.L = std::max(kLipschitzSafety * estimate.L_sampled, kLipschitzFloor);
  estimate.ell = (kLipschitzSafety * estimate.ell_sampled).cwiseMax(kLipschitzFloor);
  return estimate;
}

XiEstimate estimate_xi(const ProblemSpec& problem, double alpha,
                       const Sampler& sampler, double observed_max_mu) {
  require_positive(alpha, "alpha");
  const std::vector<Vector> points =
      sample_points(problem.input_set, sampler);
  const std::size_t N = points.size();

  const std::size_t chunks = detail::chunk_count(N);
  std::vector<double> mu_chunk(chunks, 0.0);
  std::vector<int> skipped_chunk(chunks, 0);
  detail::parallel_chunks(N, [&](std::size_t begin, std::size_t end,
                                 std::size_t chunk) {
    double mu_max = 0.0;
    int skipped = 0;
    for (std::size_t k = begin; k < end; ++k) {
      try {
        const Vector y = eval_plant(problem.plant, points[k]);
        const ControllerStep step = sigma_hat(problem, points[k], y, alpha);
        if (step.mu.size() > 0) {
          mu_max = std::max(mu_max, step.mu.maxCoeff());
        }
      } catch (const Error& e) {
        if (e.code() != ErrorCode::LinearizedSetEmpty) {
          throw;
        }
        ++skipped;
      }
    }
    mu_chunk[chunk] = mu_max;
    skipped_chunk[chunk] = skipped;
  });

  XiEstimate estimate;
  estimate.samples = static_cast<int>(N);
  estimate.max_mu = std::max(0.0, observed_max_mu);
  for (std::size_t t = 0; t < chunks; ++t) {
    estimate.max_mu = std::max(estimate.max_mu, mu_chunk[t]);
    estimate.skipped += skipped_chunk[t];
  }
  estimate.xi = std::max(kXiSafety * estimate.max_mu, kXiFloor);
  return estimate;
}

double estimate_lambda_min_G(const ProblemSpec& problem,
                             const Sampler& sampler) {
  double lambda = std::numeric_limits<double>::infinity();
  for (const Vector& u : sample_points(problem.input_set, sampler)) {
    lambda = std::min(lambda, min_eigenvalue(problem.metric(u)));
  }
  if (!(lambda > 0.0)) {
    throw Error(ErrorCode::NotPositiveDefinite,
                "metric is not positive definite on the sampled inputs");
  }
  return lambda;
}

double alpha_star(const CertificateConstants& constants) {
  require_positive(constants.L, "L");
  require_positive(constants.xi, "xi");
  require_positive(constants.lambda_min_G, "lambda_min_G");
  for (Eigen::Index i = 0; i < constants.ell.size(); ++i) {
    require_positive(constants.ell(i), "ell");
  }
  return 2.0 * constants.lambda_min_G /
         (constants.L + constants.xi * constants.ell.sum());
}

Vector transient_violation_bound(const Vector& ell, double alpha,
                                 const Vector& w) {
  const double step_sq = (alpha * w).squaredNorm();
  return 0.5 * step_sq * ell;
}

CertificateConstants estimate_constants(const ProblemSpec& problem,
                                        double alpha_probe,
                                        const Sampler& sampler) {
  const LipschitzEstimate lipschitz = estimate_lipschitz(problem, sampler);
  const XiEstimate xi = estimate_xi(problem, alpha_probe, sampler);
  const double lambda = estimate_lambda_min_G(problem, sampler);
  return CertificateConstants::make(lipschitz.L, lipschitz.ell, xi.xi, lambda);
}

}  // namespace fbopt
