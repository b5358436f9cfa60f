#include <benchmark/benchmark.h>

#include <random>

#include "fixtures.hpp"
#include "nlsctl/forward.hpp"
#include "nlsctl/objective.hpp"
#include "nlsctl/upvp.hpp"

using namespace nlsctl;
using namespace nlsctl::testing;

// Forward solve of 100 Strang steps; the argument is the spatial size n.
static void BM_ForwardSolve(benchmark::State& state) {
  const SpatialGrid grid(1, static_cast<std::size_t>(state.range(0)), 16.0);
  const ModelParams params = cubic_model(grid, 1);
  const ComplexField x0 = wave_packet(grid, -1.0, 1.2, 1.0);
  const TimeGrid time{1.0, 100};
  const ControlPath u = smooth_control(TimeGrid{1.0, 20}, 1, 0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_forward(x0, params, u, time));
  }
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_ForwardSolve)->Arg(64)->Arg(256)->Arg(1024);

// Exact V^2 norm of a scalar path with M + 1 nodes (quadratic in M).
static void BM_VpNorm(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  SampledPath<double> path;
  double x = 0.0;
  for (int k = 0; k <= state.range(0); ++k) {
    path.times.push_back(0.001 * k);
    path.values.push_back(x);
    x += normal(rng);
  }
  for (auto _ : state) benchmark::DoNotOptimize(vp_norm(path, 2.0));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_VpNorm)->RangeMultiplier(2)->Range(128, 2048)->Complexity(benchmark::oNSquared);

// One objective-plus-gradient evaluation of the reference problem; the
// argument is the number of Monte-Carlo paths.
static void BM_Gradient(benchmark::State& state) {
  const auto ref = reference_tracking_problem(kReferenceSeed, static_cast<std::size_t>(state.range(0)));
  const ControlPath u = smooth_control(ref.problem.control_time, 1, 0.3, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_gradient(u, ref.problem));
}
BENCHMARK(BM_Gradient)->Arg(0)->Arg(4)->Arg(16);

BENCHMARK_MAIN();
