#include <benchmark/benchmark.h>

#include <random>

#include "fbopt/builtins.hpp"
#include "fbopt/controller.hpp"
#include "fbopt/qp.hpp"
#include "fbopt/trajectory.hpp"

using namespace fbopt;

namespace {

QpProblem random_qp(int p, int m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  QpProblem qp;
  const Matrix B = Matrix::NullaryExpr(p, p, [&] { return normal(rng); });
  qp.Q = B * B.transpose() + Matrix::Identity(p, p);
  qp.c = Vector::NullaryExpr(p, [&] { return normal(rng); });
  qp.M = Matrix::NullaryExpr(m, p, [&] { return normal(rng); });
  qp.r = Vector::NullaryExpr(m, [&] { return normal(rng); }).cwiseAbs();
  return qp;
}

void BM_SolveQp(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  const QpProblem qp = random_qp(p, 2 * p, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_qp(qp));
  }
}
BENCHMARK(BM_SolveQp)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void BM_EnumerateOracle(benchmark::State& state) {
  const QpProblem qp = random_qp(4, 6, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(enumerate_oracle(qp));
  }
}
BENCHMARK(BM_EnumerateOracle);

void BM_FeedbackStep(benchmark::State& state) {
  const ProblemSpec problem = builtin_example();
  Vector u(2);
  u << 0.2, -0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(feedback_step(problem, u, 0.01));
  }
}
BENCHMARK(BM_FeedbackStep);

void BM_ProjectedRun(benchmark::State& state) {
  const ProblemSpec problem = builtin_example();
  RunOptions options;
  options.constants = estimate_constants(problem, 0.01,
                                         certificate_sampler(problem, 0));
  ScenarioConfig config;
  config.u0 = Vector::Zero(2);
  config.stationarity_tol = 1e-8;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_trajectory(config, problem, options));
  }
}
BENCHMARK(BM_ProjectedRun)->Unit(benchmark::kMicrosecond);

void BM_SaddleRun(benchmark::State& state) {
  const ProblemSpec problem = builtin_example();
  ScenarioConfig config;
  config.scheme = Scheme::Saddle;
  config.gamma = 0.5;
  config.rho = 1.0;
  config.u0 = Vector::Zero(2);
  config.stationarity_tol = 1e-6;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_trajectory(config, problem));
  }
}
BENCHMARK(BM_SaddleRun)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
