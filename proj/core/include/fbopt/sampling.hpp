#pragma once

#include <cstdint>
#include <vector>

#include "fbopt/model.hpp"

namespace fbopt {

/// Deterministic point generator over a bounded polyhedron.
struct Sampler {
  enum class Kind { Grid, Random };

  Kind kind = Kind::Grid;
  /// Grid resolution per coordinate (endpoints included).
  int points_per_dim = 21;
  /// Number of accepted points for Kind::Random.
  int count = 500;
  std::uint64_t seed = 0;
};

/**
 * Points of `set` from a tensor grid over its axis bounds (grid points outside
 * the set are dropped), or uniform rejection samples in the bounding box.
 */
std::vector<Vector> sample_points(const Polyhedron& set, const Sampler& sampler);

}  // namespace fbopt
