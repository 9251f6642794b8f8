#pragma once

#include <cstdint>
#include <vector>

#include "fbopt/model.hpp"

namespace fbopt {

/// Largest relative errors |analytic − fd| / max(1, |fd|) over all points.
struct FdReport {
  double plant_jacobian = 0.0;
  double objective_gradient = 0.0;
  double reduced_gradient = 0.0;
  int points = 0;

  double max_error() const;
};

/**
 * Compares ∇h, ∇Φ and ∇Φ̃ against central differences with the given step.
 * The default step is about ∛ε, where round-off and truncation errors of a
 * central difference balance. The realized step (x + h) − (x − h) is used as
 * the divisor so that affine maps are differentiated up to evaluation
 * round-off.
 */
FdReport finite_difference_check(const ProblemSpec& problem,
                                 const std::vector<Vector>& points,
                                 double step = 6e-6);

/// `count` seeded uniform points of U.
std::vector<Vector> random_inputs(const ProblemSpec& problem, int count,
                                  std::uint64_t seed);

}  // namespace fbopt
