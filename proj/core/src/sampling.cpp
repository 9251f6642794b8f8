#include "fbopt/sampling.hpp"

#include <random>

namespace fbopt {

std::vector<Vector> sample_points(const Polyhedron& set,
                                  const Sampler& sampler) {
  const auto [lower, upper] = set.axis_bounds();
  const auto dim = lower.size();
  std::vector<Vector> points;

  if (sampler.kind == Sampler::Kind::Grid) {
    const int k = sampler.points_per_dim;
    if (k < 1) {
      throw Error(ErrorCode::InvalidArgument, "grid needs at least one point");
    }
    std::vector<int> index(static_cast<size_t>(dim), 0);
    while (true) {
      Vector x(dim);
      for (Eigen::Index j = 0; j < dim; ++j) {
        const double t =
            k == 1 ? 0.5 : static_cast<double>(index[static_cast<size_t>(j)]) / (k - 1);
        x(j) = lower(j) + t * (upper(j) - lower(j));
      }
      if (set.contains(x, 1e-12)) {
        points.push_back(std::move(x));
      }
      Eigen::Index j = 0;
      for (; j < dim; ++j) {
        if (++index[static_cast<size_t>(j)] < k) {
          break;
        }
        index[static_cast<size_t>(j)] = 0;
      }
      if (j == dim) {
        break;
      }
    }
    return points;
  }

  if (sampler.count < 1) {
    throw Error(ErrorCode::InvalidArgument, "sampler count must be positive");
  }
  std::mt19937_64 rng(sampler.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const long max_draws = 1000L * sampler.count;
  for (long draw = 0;
       draw < max_draws && static_cast<int>(points.size()) < sampler.count;
       ++draw) {
    Vector x(dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
      x(j) = lower(j) + unit(rng) * (upper(j) - lower(j));
    }
    if (set.contains(x)) {
      points.push_back(std::move(x));
    }
  }
  return points;
}

}  // namespace fbopt
