#include "fbopt/fd_check.hpp"

#include <algorithm>
#include <cmath>

#include "fbopt/sampling.hpp"

namespace fbopt {

namespace {

double relative_error(double analytic, double fd) {
  return std::abs(analytic - fd) / std::max(1.0, std::abs(fd));
}

}  // namespace

double FdReport::max_error() const {
  return std::max({plant_jacobian, objective_gradient, reduced_gradient});
}

FdReport finite_difference_check(const ProblemSpec& problem,
                                 const std::vector<Vector>& points,
                                 double step) {
  const int p = problem.input_dim();
  const int n = problem.output_dim();
  FdReport report;
  report.points = static_cast<int>(points.size());

  for (const Vector& u : points) {
    require_size(u.size(), p, "check point");
    const Vector y = eval_plant(problem.plant, u);
    const Matrix J = eval_plant_jacobian(problem.plant, u);
    const RowVector g = problem.objective.gradient(u, y);
    const RowVector g_reduced = reduced_gradient(problem, u, y);

    for (int j = 0; j < p; ++j) {
      Vector up = u;
      Vector um = u;
      up(j) += step;
      um(j) -= step;
      const double width = up(j) - um(j);

      const Vector dy = (eval_plant(problem.plant, up) -
                         eval_plant(problem.plant, um)) / width;
      for (int i = 0; i < n; ++i) {
        report.plant_jacobian =
            std::max(report.plant_jacobian, relative_error(J(i, j), dy(i)));
      }

      const double dphi_u =
          (problem.objective(up, y) - problem.objective(um, y)) / width;
      report.objective_gradient =
          std::max(report.objective_gradient, relative_error(g(j), dphi_u));

      const double dphi_reduced =
          (reduced_cost(problem, up) - reduced_cost(problem, um)) / width;
      report.reduced_gradient = std::max(
          report.reduced_gradient, relative_error(g_reduced(j), dphi_reduced));
    }

    for (int i = 0; i < n; ++i) {
      Vector yp = y;
      Vector ym = y;
      yp(i) += step;
      ym(i) -= step;
      const double dphi_y =
          (problem.objective(u, yp) - problem.objective(u, ym)) / (yp(i) - ym(i));
      report.objective_gradient =
          std::max(report.objective_gradient, relative_error(g(p + i), dphi_y));
    }
  }
  return report;
}

std::vector<Vector> random_inputs(const ProblemSpec& problem, int count,
                                  std::uint64_t seed) {
  Sampler sampler;
  sampler.kind = Sampler::Kind::Random;
  sampler.count = count;
  sampler.seed = seed;
  return sample_points(problem.input_set, sampler);
}

}  // namespace fbopt
