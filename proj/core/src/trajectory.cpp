#include "fbopt/trajectory.hpp"

#include <cmath>

#include "fbopt/builtins.hpp"
#include "parallel.hpp"

namespace fbopt {

namespace {

double max_violation(const ProblemSpec& problem, const Vector& y) {
  const Vector excess = violation(problem.output_set, y);
  return excess.size() ? excess.maxCoeff() : 0.0;
}

void run_projected(const ScenarioConfig& config, const ProblemSpec& problem,
                   const RunOptions& options, TrajectoryLog& log) {
  CertificateConstants constants =
      options.constants
          ? *options.constants
          : estimate_constants(problem, config.alpha,
                               certificate_sampler(problem, config.seed));
  if (config.xi) {
    constants = CertificateConstants::make(constants.L, constants.ell,
                                           *config.xi, constants.lambda_min_G);
  }
  log.xi = constants.xi;
  log.alpha_star = constants.alpha_star;
  const bool certified = config.alpha < constants.alpha_star;

  Vector u = config.u0;
  double V = lyapunov_value(problem, constants.xi, u);
  for (int k = 0;; ++k) {
    const ControllerStep step = feedback_step(problem, u, config.alpha);
    if (options.on_projected_step) {
      options.on_projected_step(step);
    }
    log.rows.push_back({k, u, step.y, V, stationarity_residual(step),
                        max_violation(problem, step.y), step.mu});

    if (certified && step.mu.size() > 0 && step.mu.maxCoeff() > constants.xi) {
      log.certificate_violated = true;
    }
    if (stationarity_residual(step) <= config.stationarity_tol) {
      log.status = RunStatus::Converged;
      return;
    }
    if (k >= config.max_iters) {
      return;
    }
    const double V_next = lyapunov_value(problem, constants.xi, step.u_next);
    if (certified && V_next - V > 1e-12 * (1.0 + std::abs(V))) {
      log.certificate_violated = true;
    }
    u = step.u_next;
    V = V_next;
  }
}

void run_saddle(const ScenarioConfig& config, const ProblemSpec& problem,
                const RunOptions& options, TrajectoryLog& log) {
  SaddlePointState state;
  state.u = config.u0;
  state.mu = Vector::Zero(problem.output_rows());
  state.alpha = config.alpha;
  state.gamma = *config.gamma;
  state.rho = *config.rho;

  for (int k = 0;; ++k) {
    if (options.on_saddle_state) {
      options.on_saddle_state(state);
    }
    const Vector y = eval_plant(problem.plant, state.u);
    const double residual =
        saddle_kkt_residual(problem, state.u, state.mu, state.rho);
    log.rows.push_back(
        {k, state.u, y,
         augmented_lagrangian(problem, state.u, state.mu, state.rho), residual,
         max_violation(problem, y), state.mu});
    if (!std::isfinite(residual) || !state.mu.allFinite()) {
      throw Error(ErrorCode::InvalidArgument, "saddle-point iteration diverged");
    }
    if (residual <= config.stationarity_tol) {
      log.status = RunStatus::Converged;
      return;
    }
    if (k >= config.max_iters) {
      return;
    }
    state = saddle_point_step(state, problem);
  }
}

}  // namespace

std::string_view to_string(RunStatus status) {
  switch (status) {
    case RunStatus::Converged:
      return "Converged";
    case RunStatus::IterBudget:
      return "IterBudget";
    case RunStatus::CertificateViolated:
      return "CertificateViolated";
    case RunStatus::Error:
      return "Error";
  }
  return "Unknown";
}

Sampler certificate_sampler(const ProblemSpec& problem, std::uint64_t seed) {
  Sampler sampler;
  sampler.seed = seed;
  if (problem.input_dim() <= 3) {
    sampler.kind = Sampler::Kind::Grid;
    sampler.points_per_dim = problem.input_dim() == 3 ? 9 : 21;
  } else {
    sampler.kind = Sampler::Kind::Random;
    sampler.count = 600;
  }
  return sampler;
}

TrajectoryLog run_trajectory(const ScenarioConfig& config,
                             const ProblemSpec& problem,
                             const RunOptions& options) {
  validate_scenario(config, problem);
  if (config.u0.size() == 0) {
    throw Error(ErrorCode::InvalidArgument,
                "run_trajectory needs an explicit u0; expand u0_grid first");
  }
  TrajectoryLog log;
  log.input_dim = problem.input_dim();
  log.output_dim = problem.output_dim();
  log.output_rows = problem.output_rows();
  log.status = RunStatus::IterBudget;
  try {
    if (config.scheme == Scheme::Projected) {
      run_projected(config, problem, options, log);
    } else {
      run_saddle(config, problem, options, log);
    }
  } catch (const Error& e) {
    log.status = RunStatus::Error;
    log.error = e.what();
    return log;
  }
  // Converged is reported whenever the final residual met the tolerance.
  if (log.status != RunStatus::Converged && log.certificate_violated) {
    log.status = RunStatus::CertificateViolated;
  }
  return log;
}

TrajectoryLog run_trajectory(const ScenarioConfig& config) {
  return run_trajectory(config, make_builtin(config.problem_name));
}

std::vector<SweepRun> sweep(const ScenarioConfig& base,
                            const ParameterGrid& grid,
                            const ProblemSpec& problem) {
  std::vector<SweepRun> runs;
  for (const ScenarioConfig& config : expand_grid(base, grid)) {
    for (const Vector& u0 : initial_conditions(config, problem)) {
      SweepRun run;
      run.config = config;
      run.config.u0 = u0;
      run.config.u0_grid = 0;
      runs.push_back(std::move(run));
    }
  }
  for (const SweepRun& run : runs) {
    validate_scenario(run.config, problem);
  }

  detail::parallel_chunks(runs.size(), [&](std::size_t begin, std::size_t end,
                                           std::size_t) {
    for (std::size_t k = begin; k < end; ++k) {
      runs[k].log = run_trajectory(runs[k].config, problem);
    }
  });
  return runs;
}

std::vector<SweepRun> sweep(const ScenarioConfig& base,
                            const ParameterGrid& grid) {
  return sweep(base, grid, make_builtin(base.problem_name));
}

double max_transient_violation(const TrajectoryLog& log) {
  double worst = 0.0;
  for (size_t k = 1; k < log.rows.size(); ++k) {
    worst = std::max(worst, log.rows[k].max_violation);
  }
  return worst;
}

}  // namespace fbopt
