#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "fbopt/builtins.hpp"
#include "fbopt/certificates.hpp"
#include "fbopt/csv.hpp"
#include "fbopt/fd_check.hpp"
#include "fbopt/scenario.hpp"
#include "fbopt/trajectory.hpp"

namespace fs = std::filesystem;
using namespace fbopt;

namespace {

// Exit codes: 0 success, 1 error, 2 a run ended without converging,
// 3 a derivative check exceeded its tolerance.
constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kNotConverged = 2;
constexpr int kDerivativeMismatch = 3;

std::string join(const Vector& v) {
  std::string out;
  char buf[32];
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%s%.6g", i ? " " : "", v(i));
    out += buf;
  }
  return out;
}

std::string indexed_name(const std::string& stem, size_t index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "_%03zu", index);
  return stem + buf + ".csv";
}

void print_summary(std::ostream& out, size_t index, const ScenarioConfig& c,
                   const TrajectoryLog& log) {
  const TrajectoryRow& last = log.rows.back();
  char line[512];
  std::snprintf(line, sizeof line,
                "%3zu  u0=[%s]  alpha=%g  %-19s iters=%-6d u=[%s]  "
                "residual=%.3e  max_violation=%.3e\n",
                index, join(c.u0).c_str(), c.alpha,
                std::string(to_string(log.status)).c_str(), last.iter,
                join(last.u).c_str(), last.residual,
                max_transient_violation(log));
  out << line;
  if (!log.error.empty()) {
    out << "     error: " << log.error << "\n";
  }
}

int cmd_run(const std::string& scenario_path, const std::string& out_dir) {
  ScenarioConfig config = load_scenario(scenario_path);
  if (!out_dir.empty()) {
    config.output_dir = out_dir;
  }
  const ProblemSpec problem = make_builtin(config.problem_name);
  validate_scenario(config, problem);

  // A single-valued grid reuses the concurrent sweep machinery.
  const ParameterGrid grid{{"alpha", {config.alpha}}};
  const std::vector<SweepRun> runs = sweep(config, grid, problem);

  fs::create_directories(config.output_dir);
  int code = kOk;
  for (size_t k = 0; k < runs.size(); ++k) {
    write_csv(runs[k].log,
              fs::path(config.output_dir) /
                  (runs.size() == 1 ? std::string("trajectory.csv")
                                    : indexed_name("trajectory", k)));
    print_summary(std::cout, k, runs[k].config, runs[k].log);
    if (runs[k].log.status == RunStatus::Error) {
      code = kError;
    } else if (runs[k].log.status != RunStatus::Converged && code == kOk) {
      code = kNotConverged;
    }
  }
  return code;
}

int cmd_sweep(const std::string& scenario_path, const std::string& grid_path,
              const std::string& out_dir) {
  ScenarioConfig config = load_scenario(scenario_path);
  if (!out_dir.empty()) {
    config.output_dir = out_dir;
  }
  const ProblemSpec problem = make_builtin(config.problem_name);
  const ParameterGrid grid = load_grid(grid_path);
  for (const ScenarioConfig& c : expand_grid(config, grid)) {
    validate_scenario(c, problem);
  }
  const std::vector<SweepRun> runs = sweep(config, grid, problem);

  fs::create_directories(config.output_dir);
  std::ofstream summary(fs::path(config.output_dir) / "summary.csv");
  if (!summary) {
    throw Error(ErrorCode::Io, "cannot write summary.csv in " + config.output_dir);
  }
  summary << "run,scheme,alpha,gamma,rho,stationarity_tol";
  for (int i = 1; i <= problem.input_dim(); ++i) {
    summary << ",u0_" << i;
  }
  summary << ",status,iterations,final_residual,max_transient_violation\n";
  summary.precision(17);

  int code = kOk;
  for (size_t k = 0; k < runs.size(); ++k) {
    const ScenarioConfig& c = runs[k].config;
    const TrajectoryLog& log = runs[k].log;
    write_csv(log, fs::path(config.output_dir) / indexed_name("sweep", k));
    summary << k << ',' << to_string(c.scheme) << ',' << c.alpha << ','
            << c.gamma.value_or(0.0) << ',' << c.rho.value_or(0.0) << ','
            << c.stationarity_tol;
    for (Eigen::Index i = 0; i < c.u0.size(); ++i) {
      summary << ',' << c.u0(i);
    }
    summary << ',' << to_string(log.status) << ',' << log.rows.back().iter << ','
            << log.rows.back().residual << ',' << max_transient_violation(log)
            << '\n';
    print_summary(std::cout, k, c, log);
    if (log.status == RunStatus::Error) {
      code = kError;
    }
  }
  return code;
}

int cmd_compare(const std::string& scenario_path) {
  const ScenarioConfig config = load_scenario(scenario_path);
  const ProblemSpec problem = make_builtin(config.problem_name);

  ScenarioConfig proj = config;
  proj.scheme = Scheme::Projected;
  proj.gamma.reset();
  proj.rho.reset();
  ScenarioConfig saddle = config;
  saddle.scheme = Scheme::Saddle;
  saddle.gamma = config.gamma.value_or(0.5);
  saddle.rho = config.rho.value_or(1.0);
  validate_scenario(proj, problem);
  validate_scenario(saddle, problem);

  const ParameterGrid grid{{"alpha", {config.alpha}}};
  const std::vector<SweepRun> a = sweep(proj, grid, problem);
  const std::vector<SweepRun> b = sweep(saddle, grid, problem);

  std::printf("problem %s, alpha %g, saddle gamma %g rho %g\n",
              config.problem_name.c_str(), config.alpha, *saddle.gamma,
              *saddle.rho);
  std::printf("%-22s | %-19s %8s %12s %10s | %-19s %8s %12s %10s\n", "u0",
              "projected", "iters", "cost", "violation", "saddle", "iters",
              "cost", "violation");
  bool failed = false;
  for (size_t k = 0; k < a.size(); ++k) {
    const auto cell = [&](const TrajectoryLog& log) {
      const TrajectoryRow& last = log.rows.back();
      char buf[128];
      std::snprintf(buf, sizeof buf, "%-19s %8d %12.6g %10.3e",
                    std::string(to_string(log.status)).c_str(), last.iter,
                    reduced_cost(problem, last.u), last.max_violation);
      failed = failed || log.status == RunStatus::Error;
      return std::string(buf);
    };
    std::printf("%-22s | %s | %s\n", ("[" + join(a[k].config.u0) + "]").c_str(),
                cell(a[k].log).c_str(), cell(b[k].log).c_str());
  }
  return failed ? kError : kOk;
}

int cmd_check(const std::string& name, int points, std::uint64_t seed) {
  const ProblemSpec problem = make_builtin(name);
  const FdReport fd =
      finite_difference_check(problem, random_inputs(problem, points, seed));
  std::printf("problem %s: %d inputs, %d outputs, %d output rows\n",
              problem.name.c_str(), problem.input_dim(), problem.output_dim(),
              problem.output_rows());
  std::printf("finite differences over %d points (max relative error)\n",
              fd.points);
  std::printf("  plant jacobian      %.3e\n", fd.plant_jacobian);
  std::printf("  objective gradient  %.3e\n", fd.objective_gradient);
  std::printf("  reduced gradient    %.3e\n", fd.reduced_gradient);

  const Sampler sampler = certificate_sampler(problem, seed);
  const LipschitzEstimate lip = estimate_lipschitz(problem, sampler);
  const XiEstimate xi = estimate_xi(problem, 0.01, sampler);
  const double lambda = estimate_lambda_min_G(problem, sampler);
  const CertificateConstants c =
      CertificateConstants::make(lip.L, lip.ell, xi.xi, lambda);
  std::printf("certificate constants (%d samples)\n", lip.samples);
  std::printf("  L             %.6g (sampled %.6g)\n", c.L, lip.L_sampled);
  std::printf("  ell           [%s] (sampled [%s])\n", join(c.ell).c_str(),
              join(lip.ell_sampled).c_str());
  std::printf("  xi            %.6g (max mu %.6g at alpha 0.01, %d skipped)\n",
              c.xi, xi.max_mu, xi.skipped);
  std::printf("  lambda_min(G) %.6g\n", c.lambda_min_G);
  std::printf("  alpha*        %.6g\n", c.alpha_star);
  const bool ok = fd.max_error() < 1e-6;
  std::printf("derivatives %s\n", ok ? "ok" : "MISMATCH");
  return ok ? kOk : kDerivativeMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feedback optimization experiments"};
  app.require_subcommand(1);

  std::string scenario;
  std::string grid;
  std::string out;
  std::string problem;
  int points = 100;
  std::uint64_t seed = 0;

  auto* run = app.add_subcommand("run", "Run a scenario and write one CSV per start");
  run->add_option("--scenario", scenario, "Scenario file")->required();
  run->add_option("--out", out, "Output directory (overrides output_dir)");

  auto* sw = app.add_subcommand("sweep", "Run a scenario over a parameter grid");
  sw->add_option("--scenario", scenario, "Scenario file")->required();
  sw->add_option("--grid", grid, "Grid file")->required();
  sw->add_option("--out", out, "Output directory (overrides output_dir)");

  auto* cmp = app.add_subcommand(
      "compare", "Projected vs saddle-point runs side by side");
  cmp->add_option("--scenario", scenario, "Scenario file")->required();

  auto* chk = app.add_subcommand(
      "check", "Derivative check and certificate constants for a problem");
  chk->add_option("--problem", problem, "Builtin problem name")->required();
  chk->add_option("--points", points, "Random points for finite differences")
      ->check(CLI::PositiveNumber);
  chk->add_option("--seed", seed, "Sampling seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      return cmd_run(scenario, out);
    }
    if (*sw) {
      return cmd_sweep(scenario, grid, out);
    }
    if (*cmp) {
      return cmd_compare(scenario);
    }
    return cmd_check(problem, points, seed);
  } catch (const Error& e) {
    std::cerr << "fbopt: " << e.what() << "\n";
    return kError;
  } catch (const std::exception& e) {
    std::cerr << "fbopt: " << e.what() << "\n";
    return kError;
  }
}
