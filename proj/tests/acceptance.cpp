// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.
//
// usage: acceptance <path-to-fbopt-cli> <scratch-dir>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fbopt/builtins.hpp"
#include "fbopt/certificates.hpp"
#include "fbopt/controller.hpp"
#include "fbopt/fd_check.hpp"
#include "fbopt/qp.hpp"
#include "fbopt/tangent_flow.hpp"
#include "fbopt/trajectory.hpp"

using namespace fbopt;
namespace fs = std::filesystem;

namespace {

constexpr int kGrid = 5;
constexpr int kBudget = 100000;
constexpr double kTol = 1e-6;

struct Result {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));

std::string fmt(const char* format, ...) {
  char buffer[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buffer, sizeof buffer, format, args);
  va_end(args);
  return buffer;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

std::vector<Vector> grid_starts(const ProblemSpec& P) {
  ScenarioConfig c;
  c.u0_grid = kGrid;
  return initial_conditions(c, P);
}

ScenarioConfig projected(const Vector& u0, double alpha) {
  ScenarioConfig c;
  c.u0 = u0;
  c.alpha = alpha;
  c.max_iters = kBudget;
  c.stationarity_tol = kTol;
  return c;
}

// Projected run that also checks the per-step violation bound.
struct CheckedRun {
  TrajectoryLog log;
  int bound_breaches = 0;
  double worst_bound_margin = -INFINITY;
};

CheckedRun run_checked(const ProblemSpec& P, const ScenarioConfig& config,
                       const CertificateConstants& constants,
                       const std::function<void(const ControllerStep&)>& extra =
                           {}) {
  CheckedRun out;
  RunOptions options;
  options.constants = constants;
  const Matrix& C = P.output_set.A();
  const Vector& d = P.output_set.b();
  options.on_projected_step = [&](const ControllerStep& s) {
    const Vector measured = C * eval_plant(P.plant, s.u_next) - d;
    const Vector bound = transient_violation_bound(constants.ell, s.alpha, s.w);
    for (Eigen::Index i = 0; i < measured.size(); ++i) {
      const double margin = measured(i) - bound(i);
      out.worst_bound_margin = std::max(out.worst_bound_margin, margin);
      if (margin > 1e-9) {
        ++out.bound_breaches;
      }
    }
    if (extra) {
      extra(s);
    }
  };
  out.log = run_trajectory(config, P, options);
  return out;
}

struct Context {
  ProblemSpec P = builtin_example();
  CertificateConstants constants;
  std::vector<Vector> starts;
  std::vector<CheckedRun> at_default;  // α = 0.01
  double default_seconds = 0.0;
};

Result convergence(Context& ctx) {
  const auto start = std::chrono::steady_clock::now();
  ctx.constants = estimate_constants(ctx.P, 0.01, certificate_sampler(ctx.P, 0));
  ctx.starts = grid_starts(ctx.P);
  for (const Vector& u0 : ctx.starts) {
    ctx.at_default.push_back(run_checked(ctx.P, projected(u0, 0.01), ctx.constants));
  }
  ctx.default_seconds = seconds_since(start);

  int converged = 0;
  int max_iters = 0;
  double worst_input = -INFINITY;
  double worst_output = -INFINITY;
  double worst_kkt = 0.0;
  for (const CheckedRun& run : ctx.at_default) {
    const TrajectoryRow& last = run.log.rows.back();
    if (run.log.status == RunStatus::Converged && last.residual <= kTol) {
      ++converged;
    }
    max_iters = std::max(max_iters, last.iter);
    worst_input = std::max(
        worst_input, (ctx.P.input_set.A() * last.u - ctx.P.input_set.b()).maxCoeff());
    worst_output = std::max(
        worst_output,
        (ctx.P.output_set.A() * eval_plant(ctx.P.plant, last.u) - ctx.P.output_set.b())
            .maxCoeff());
    const ControllerStep s = feedback_step(ctx.P, last.u, 0.01);
    worst_kkt = std::max(worst_kkt, first_order_residual(ctx.P, last.u, s.nu, s.mu));
  }
  const int n = static_cast<int>(ctx.starts.size());
  Result r;
  r.pass = converged == n && worst_input <= 1e-9 && worst_output <= 1e-8 &&
           worst_kkt <= 1e-6 && ctx.default_seconds < 10.0;
  r.detail = fmt("%d/%d converged, max iter %d, Au-b %.2e, Ch-d %.2e, "
                 "KKT %.2e, %.2f s",
                 converged, n, max_iters, worst_input, worst_output, worst_kkt,
                 ctx.default_seconds);
  return r;
}

Result lyapunov_descent(Context& ctx) {
  const double alpha = 0.9 * ctx.constants.alpha_star;
  const double xi = ctx.constants.xi;
  int increases = 0;
  long steps = 0;
  double worst = -INFINITY;
  int flagged = 0;
  int errors = 0;
  for (const Vector& u0 : ctx.starts) {
    const CheckedRun run =
        run_checked(ctx.P, projected(u0, alpha), ctx.constants,
                    [&](const ControllerStep& s) {
                      const double V = lyapunov_value(ctx.P, xi, s.u);
                      const double Vn = lyapunov_value(ctx.P, xi, s.u_next);
                      const double rel = (Vn - V) / (1.0 + std::abs(V));
                      worst = std::max(worst, rel);
                      ++steps;
                      if (Vn - V > 1e-12 * (1.0 + std::abs(V))) {
                        ++increases;
                      }
                    });
    flagged += run.log.certificate_violated ? 1 : 0;
    errors += run.log.status == RunStatus::Error ? 1 : 0;
  }
  Result r;
  r.pass = increases == 0 && errors == 0 && steps > 0;
  r.detail = fmt("alpha=0.9*%.4e, xi=%.4g, %ld steps, %d increases, worst "
                 "relative change %.2e, %d runs saw mu>xi",
                 ctx.constants.alpha_star, xi, steps, increases, worst, flagged);
  return r;
}

Result transient_violation(Context& ctx) {
  int breaches = 0;
  double worst_margin = -INFINITY;
  int considered = 0;
  int below_factor = 0;
  int outside_y = 0;
  double worst_ratio = INFINITY;
  std::string worst_start;
  for (size_t k = 0; k < ctx.starts.size(); ++k) {
    const CheckedRun& full = ctx.at_default[k];
    const CheckedRun half =
        run_checked(ctx.P, projected(ctx.starts[k], 0.005), ctx.constants);
    breaches += full.bound_breaches + half.bound_breaches;
    worst_margin = std::max({worst_margin, full.worst_bound_margin,
                             half.worst_bound_margin});
    const double vf = max_transient_violation(full.log);
    const double vh = max_transient_violation(half.log);
    if (vf <= 1e-12) {
      continue;
    }
    ++considered;
    const Vector y0 = eval_plant(ctx.P.plant, ctx.starts[k]);
    outside_y += ctx.P.output_set.contains(y0) ? 0 : 1;
    const double ratio = vh > 0.0 ? vf / vh : INFINITY;
    if (ratio < 3.0) {
      ++below_factor;
    }
    if (ratio < worst_ratio) {
      worst_ratio = ratio;
      worst_start = fmt("(%g, %g) %.4g -> %.4g", ctx.starts[k](0),
                        ctx.starts[k](1), vf, vh);
    }
  }
  Result r;
  r.pass = breaches == 0 && below_factor == 0;
  r.detail = fmt("bound breaches %d (worst margin %.2e); halving alpha "
                 "0.01->0.005: %d/%d violating runs below factor 3, %d/%d "
                 "violating runs start outside Y, worst ratio %.3g at %s",
                 breaches, worst_margin, below_factor, considered, outside_y,
                 considered,
                 worst_ratio, worst_start.c_str());
  return r;
}

Result qp_oracle() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<int> pick_p(1, 4);
  std::uniform_int_distribution<int> pick_m(0, 6);
  std::uniform_real_distribution<double> slack(-0.5, 1.0);
  int agreed = 0;
  int drawn = 0;
  double worst_w = 0.0;
  double worst_mult = 0.0;
  int accepted = 0;
  while (accepted < 100) {
    ++drawn;
    const int p = pick_p(rng);
    const int m = pick_m(rng);
    QpProblem qp;
    const Matrix B = Matrix::NullaryExpr(p, p, [&] { return normal(rng); });
    qp.Q = B * B.transpose() + 0.1 * Matrix::Identity(p, p);
    qp.c = Vector::NullaryExpr(p, [&] { return normal(rng); });
    qp.M = Matrix::NullaryExpr(m, p, [&] { return normal(rng); });
    const Vector w0 = Vector::NullaryExpr(p, [&] { return normal(rng); });
    qp.r = qp.M * w0 +
           Vector::NullaryExpr(m, [&] { return slack(rng); }).cwiseMax(0.0);
    const QpSolution oracle = enumerate_oracle(qp);
    if (!oracle.active.empty() &&
        row_rank(select_rows(qp.M, oracle.active)) <
            static_cast<int>(oracle.active.size())) {
      continue;  // LICQ fails at the solution; redraw
    }
    ++accepted;
    const QpSolution s = solve_qp(qp);
    const double dw = (s.w - oracle.w).norm();
    const double dm = (s.multipliers - oracle.multipliers).norm();
    worst_w = std::max(worst_w, dw);
    worst_mult = std::max(worst_mult, dm);
    if (dw <= 1e-8 && dm <= 1e-6) {
      ++agreed;
    }
  }
  const double seconds = seconds_since(start);
  Result r;
  r.pass = agreed == 100 && seconds < 5.0;
  r.detail = fmt("%d/100 agree (%d drawn), max |dw| %.2e, max |dlambda| "
                 "%.2e, %.3f s",
                 agreed, drawn, worst_w, worst_mult, seconds);
  return r;
}

Result limit_consistency_check(Context& ctx) {
  const std::vector<std::pair<double, double>> candidates{
      {-0.5, 0.0},  {-0.125, 0.5}, {0.5, 0.0},  {-0.5, -1.0},
      {-0.5, 1.0},  {0.0, 0.0},    {0.0, 0.95}, {0.5, 0.5},
      {0.25, 0.5},  {0.0, 1.0},    {0.4, 0.9},  {-0.2, -0.5},
      {0.0, -1.0}};
  const std::vector<double> alphas{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  int feasible = 0;
  int output_active = 0;
  int monotone = 0;
  int tail_ok = 0;
  double worst_tail = 0.0;
  for (const auto& [a, b] : candidates) {
    Vector u(2);
    u << a, b;
    TangentCone cone;
    try {
      cone = tangent_cone(ctx.P, u);
    } catch (const Error&) {
      continue;
    }
    ++feasible;
    output_active += cone.active_output.empty() ? 0 : 1;
    const auto table = limit_consistency(ctx.P, u, alphas);
    monotone += is_non_increasing(table, 1e-10) ? 1 : 0;
    worst_tail = std::max(worst_tail, table.back().deviation);
    tail_ok += table.back().deviation <= 1e-8 ? 1 : 0;
  }
  Result r;
  r.pass = feasible >= 10 && output_active >= 2 && monotone == feasible &&
           tail_ok == feasible;
  r.detail = fmt("%d feasible points (%d output-active), %d monotone, worst "
                 "deviation at alpha=1e-6 %.2e",
                 feasible, output_active, monotone, worst_tail);
  return r;
}

Result saddle_contrast(Context& ctx) {
  struct Setting {
    double gamma;
    double rho;
    int converged = 0;
  };
  std::vector<Setting> settings{{5.0, 1.0}, {5.0, 1000.0}, {0.5, 1.0}};
  for (Setting& s : settings) {
    for (const Vector& u0 : ctx.starts) {
      ScenarioConfig c = projected(u0, 0.01);
      c.scheme = Scheme::Saddle;
      c.gamma = s.gamma;
      c.rho = s.rho;
      s.converged +=
          run_trajectory(c, ctx.P).status == RunStatus::Converged ? 1 : 0;
    }
  }
  int projected_converged = 0;
  for (const CheckedRun& run : ctx.at_default) {
    projected_converged += run.log.status == RunStatus::Converged ? 1 : 0;
  }
  const int n = static_cast<int>(ctx.starts.size());
  Result r;
  r.pass = settings[0].converged < n && settings[1].converged < n &&
           settings[2].converged == n && projected_converged == n;
  r.detail = fmt("converged of %d: gamma=5,rho=1: %d; gamma=5,rho=1000: %d; "
                 "gamma=0.5,rho=1: %d; projected: %d",
                 n, settings[0].converged, settings[1].converged,
                 settings[2].converged, projected_converged);
  return r;
}

Result derivative_oracles() {
  double worst = 0.0;
  std::string names;
  for (const std::string& name : builtin_names()) {
    const ProblemSpec P = make_builtin(name);
    const FdReport report = finite_difference_check(P, random_inputs(P, 100, 99));
    worst = std::max(worst, report.max_error());
    names += (names.empty() ? "" : ",") + name + fmt("=%.1e", report.max_error());
  }
  Result r;
  r.pass = worst < 1e-6;
  r.detail = names;
  return r;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

Result determinism(const std::string& cli, const fs::path& scratch) {
  fs::remove_all(scratch);
  fs::create_directories(scratch);
  const fs::path scenario = scratch / "scenario.txt";
  {
    std::ofstream out(scenario);
    out << "problem = cubic_2x1\nscheme = projected\nalpha = 0.01\n"
           "u0_grid = 3\nstationarity_tol = 1e-8\nseed = 7\n";
  }
  std::vector<int> codes;
  for (const char* dir : {"first", "second"}) {
    const std::string command = "\"" + cli + "\" run --scenario \"" +
                                scenario.string() + "\" --out \"" +
                                (scratch / dir).string() + "\" > \"" +
                                (scratch / dir).string() + ".log\" 2>&1";
    codes.push_back(std::system(command.c_str()));
  }
  int files = 0;
  int identical = 0;
  if (fs::exists(scratch / "first")) {
    for (const auto& entry : fs::directory_iterator(scratch / "first")) {
      ++files;
      const fs::path other = scratch / "second" / entry.path().filename();
      if (fs::exists(other) && slurp(entry.path()) == slurp(other)) {
        ++identical;
      }
    }
  }
  Result r;
  r.pass = codes[0] == 0 && codes[1] == 0 && files > 0 && identical == files;
  r.detail = fmt("exit codes %d/%d, %d/%d CSV files byte-identical", codes[0],
                 codes[1], identical, files);
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: %s <fbopt-cli> <scratch-dir>\n", argv[0]);
    return 2;
  }
  Context ctx;
  struct Named {
    const char* name;
    std::function<Result()> check;
  };
  const std::vector<Named> criteria{
      {"1 convergence on the 5x5 grid", [&] { return convergence(ctx); }},
      {"2 Lyapunov descent at 0.9 alpha*", [&] { return lyapunov_descent(ctx); }},
      {"3 transient violation bound and alpha scaling",
       [&] { return transient_violation(ctx); }},
      {"4 QP solver vs enumeration oracle", [] { return qp_oracle(); }},
      {"5 limit consistency with the projected field",
       [&] { return limit_consistency_check(ctx); }},
      {"6 saddle-point contrast", [&] { return saddle_contrast(ctx); }},
      {"7 derivative oracles", [] { return derivative_oracles(); }},
      {"8 deterministic CLI output",
       [&] { return determinism(argv[1], fs::path(argv[2])); }},
  };
  int failed = 0;
  for (const Named& c : criteria) {
    Result r;
    try {
      r = c.check();
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    failed += r.pass ? 0 : 1;
    std::printf("%s  %s: %s\n", r.pass ? "PASS" : "FAIL", c.name,
                r.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n",
              static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
