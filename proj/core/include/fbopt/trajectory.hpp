#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fbopt/certificates.hpp"
#include "fbopt/controller.hpp"
#include "fbopt/saddle.hpp"
#include "fbopt/scenario.hpp"

namespace fbopt {

enum class RunStatus { Converged, IterBudget, CertificateViolated, Error };

std::string_view to_string(RunStatus status);

/**
 * One logged iterate. For the projected scheme `value` is V(u) and `residual`
 * is ‖σ_α(u)‖_G; for the saddle scheme they are the augmented Lagrangian and
 * its natural KKT residual. `mu` holds the output multipliers of the step
 * (projected) or the dual iterate (saddle).
 */
struct TrajectoryRow {
  int iter = 0;
  Vector u;
  Vector y;
  double value = 0.0;
  double residual = 0.0;
  double max_violation = 0.0;
  Vector mu;

  bool operator==(const TrajectoryRow&) const = default;
};

struct TrajectoryLog {
  int input_dim = 0;
  int output_dim = 0;
  int output_rows = 0;
  std::vector<TrajectoryRow> rows;
  RunStatus status = RunStatus::IterBudget;
  /// A V increase or a multiplier above ξ was observed while α < α*.
  bool certificate_violated = false;
  /// Weight used in the V column (projected scheme).
  double xi = 0.0;
  /// α* from the constants in effect (projected scheme).
  double alpha_star = 0.0;
  std::string error;
};

struct RunOptions {
  /// Skips estimation when set; `xi` in the config still overrides ξ.
  std::optional<CertificateConstants> constants;
  /// Called after every projected controller step.
  std::function<void(const ControllerStep&)> on_projected_step;
  /// Called with every saddle-point iterate, including the initial one.
  std::function<void(const SaddlePointState&)> on_saddle_state;
};

/// Sampler used when the harness estimates certificate constants.
Sampler certificate_sampler(const ProblemSpec& problem, std::uint64_t seed);

/**
 * Runs one closed-loop trajectory from config.u0 (which must be set). Stops
 * once the residual drops to stationarity_tol or after max_iters steps; the
 * log then has at most max_iters + 1 rows. Step errors end the run with
 * status Error.
 */
TrajectoryLog run_trajectory(const ScenarioConfig& config,
                             const ProblemSpec& problem,
                             const RunOptions& options = {});

/// Resolves the problem from the builtin registry.
TrajectoryLog run_trajectory(const ScenarioConfig& config);

struct SweepRun {
  ScenarioConfig config;
  TrajectoryLog log;
};

/**
 * One run per grid point and initial condition, executed concurrently.
 * Results are in expansion order regardless of scheduling.
 */
std::vector<SweepRun> sweep(const ScenarioConfig& base, const ParameterGrid& grid,
                            const ProblemSpec& problem);

std::vector<SweepRun> sweep(const ScenarioConfig& base, const ParameterGrid& grid);

/// Largest max_violation over rows 1..end (iterates produced by the scheme).
double max_transient_violation(const TrajectoryLog& log);

}  // namespace fbopt
