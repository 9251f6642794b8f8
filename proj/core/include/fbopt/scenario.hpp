#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fbopt/model.hpp"

namespace fbopt {

enum class Scheme { Projected, Saddle };

std::string_view to_string(Scheme scheme);

/**
 * One closed-loop experiment. Loaded from a flat `key = value` file:
 *
 *   problem          registry name (default cubic_2x1)
 *   scheme           projected | saddle
 *   alpha            primal step size
 *   gamma, rho       dual step and augmentation (saddle only)
 *   u0               comma-separated initial input, or
 *   u0_grid          k: k points per coordinate over the bounds of U
 *   max_iters        iteration budget
 *   stationarity_tol convergence threshold on the residual column
 *   seed             seed for certificate sampling
 *   xi               optional fixed weight of the violation term in V
 *   output_dir       where `run` writes CSV files
 *
 * Lines starting with '#' and blank lines are ignored.
 */
struct ScenarioConfig {
  std::string problem_name = "cubic_2x1";
  Scheme scheme = Scheme::Projected;
  double alpha = 0.01;
  std::optional<double> gamma;
  std::optional<double> rho;
  Vector u0;
  int u0_grid = 0;
  int max_iters = 100000;
  double stationarity_tol = 1e-8;
  std::uint64_t seed = 0;
  std::optional<double> xi;
  std::string output_dir = ".";
};

/// Throws Parse on unknown keys or malformed values.
ScenarioConfig parse_scenario(std::string_view text);

ScenarioConfig load_scenario(const std::filesystem::path& path);

/**
 * Checks alpha > 0, that gamma/rho are present exactly for the saddle scheme,
 * that the initial condition is specified and lies in U. Throws
 * InvalidArgument or NotFeasible.
 */
void validate_scenario(const ScenarioConfig& config, const ProblemSpec& problem);

/// The explicit u0, or the grid points of U when u0_grid > 0.
std::vector<Vector> initial_conditions(const ScenarioConfig& config,
                                       const ProblemSpec& problem);

/// Ordered parameter lists for sweeps, e.g. `alpha = 0.005, 0.01`.
using ParameterGrid = std::vector<std::pair<std::string, std::vector<double>>>;

ParameterGrid parse_grid(std::string_view text);

ParameterGrid load_grid(const std::filesystem::path& path);

/// Cartesian product of the grid applied to `base`, first key varying slowest.
std::vector<ScenarioConfig> expand_grid(const ScenarioConfig& base,
                                        const ParameterGrid& grid);

}  // namespace fbopt
