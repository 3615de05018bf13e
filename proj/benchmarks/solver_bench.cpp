#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "censolve/discretize.hpp"
#include "censolve/parabolic.hpp"
#include "censolve/scheme.hpp"
#include "censolve/stationary.hpp"

namespace {

using namespace censolve;

const Domain1D kUnit{0.0, 1.0};

ProblemSpec make_problem(int n) {
  ProblemSpec p(KernelSpec::censored_stable(0.5, kUnit), Grid(kUnit, n));
  p.phi = BoundaryData::constant(0.0, 0.0);
  p.f = p.grid.sample([](double x) { return std::sin(2 * std::numbers::pi * x); });
  return p;
}

GridFunction test_field(const Grid& g) {
  return g.sample([](double x) { return 0.5 * std::sin(std::numbers::pi * x); });
}

}  // namespace

static void BM_AssembleCensored(benchmark::State& state) {
  const Grid g(kUnit, static_cast<int>(state.range(0)));
  const KernelSpec spec = KernelSpec::censored_stable(0.5, kUnit);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_operator(spec, g));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AssembleCensored)->RangeMultiplier(2)->Range(100, 1600)->Complexity();

static void BM_AssembleRegional(benchmark::State& state) {
  const Grid g(kUnit, static_cast<int>(state.range(0)));
  const KernelSpec spec = KernelSpec::regional_stable(0.5, kUnit);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_operator(spec, g));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AssembleRegional)->RangeMultiplier(2)->Range(100, 1600)->Complexity();

static void BM_ApplyOperator(benchmark::State& state) {
  const Grid g(kUnit, static_cast<int>(state.range(0)));
  const DiscreteOperator op = assemble_operator(KernelSpec::censored_stable(0.5, kUnit), g);
  const GridFunction u = test_field(g);
  for (auto _ : state) benchmark::DoNotOptimize(op.apply(u));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(g.size()));
}
BENCHMARK(BM_ApplyOperator)->RangeMultiplier(2)->Range(100, 1600);

// One Gauss-Seidel iteration (ascending plus descending sweep).
static void BM_GaussSeidelIteration(benchmark::State& state) {
  const Scheme scheme(make_problem(static_cast<int>(state.range(0))));
  const SweepSystem system = stationary_system(scheme.problem());
  const GridFunction start = test_field(scheme.grid());
  // A huge tolerance stops the solver after exactly one iteration.
  const SweepOptions options{.tol = 1e300, .max_iter = 1, .shift_correction = false};
  for (auto _ : state) benchmark::DoNotOptimize(gauss_seidel(scheme, system, start, options));
}
BENCHMARK(BM_GaussSeidelIteration)->RangeMultiplier(2)->Range(100, 400);

static void BM_ExplicitStep(benchmark::State& state) {
  const Scheme scheme(make_problem(static_cast<int>(state.range(0))));
  const GridFunction u = test_field(scheme.grid());
  for (auto _ : state) benchmark::DoNotOptimize(advance(scheme, u, 0.0, 1.0));
}
BENCHMARK(BM_ExplicitStep)->RangeMultiplier(2)->Range(100, 400);

static void BM_SolveStationary(benchmark::State& state) {
  const Scheme scheme(make_problem(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(solve_stationary(scheme));
}
BENCHMARK(BM_SolveStationary)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
