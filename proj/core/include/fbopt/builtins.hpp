#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fbopt/model.hpp"

namespace fbopt {

/**
 * Two-input, one-output cubic benchmark:
 *
 *   h(u) = u₂³ + u₁ − u₂ + 0.5
 *   Φ(u, y) = 1.5u₁² + u₂² − u₂³ + u₁u₂ − 3u₂ + 1.5 + y
 *   U = [−1, 1]², Y = [0, 1], G ≡ I
 */
ProblemSpec builtin_example();

/// Registered problem names, in registry order.
std::vector<std::string> builtin_names();

/// Looks up a registered problem. Throws UnknownProblem.
ProblemSpec make_builtin(std::string_view name);

}  // namespace fbopt
