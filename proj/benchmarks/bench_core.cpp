// Microbenchmarks for the hot paths: the spectral Poisson solve, theta
// section-norm evaluation, and single-fiber Monge-Ampere solves.

#include <benchmark/benchmark.h>

#include <cmath>

#include "fibermetric/family.hpp"
#include "fibermetric/ma_solver.hpp"
#include "fibermetric/spectral.hpp"
#include "fibermetric/theta.hpp"

using namespace fm;

namespace {

Field smooth_source(const TorusGrid& g) {
  Field f(g, FieldKind::generic);
  for (std::size_t j = 0; j < g.n_side; ++j)
    for (std::size_t i = 0; i < g.n_side; ++i)
      f.at(i, j) = std::cos(2.0 * kPi * g.x(i)) * std::sin(2.0 * kPi * g.y(j));
  return f;
}

void BM_PoissonSolve(benchmark::State& state) {
  const TorusGrid g(std::size_t(state.range(0)), cplx(0.2, 1.1));
  const Field src = smooth_source(g);
  for (auto _ : state) benchmark::DoNotOptimize(poisson_solve(src));
  state.SetComplexityN(state.range(0));
}

void BM_ThetaSectionNorm(benchmark::State& state) {
  const TorusGrid g(std::size_t(state.range(0)), cplx(0.2, 1.1));
  for (auto _ : state)
    benchmark::DoNotOptimize(theta_section_norm(0.31307, 0.69251, g));
}

FiberProblem conic_problem(std::size_t n, double lambda) {
  const TorusGrid g(n, cplx(0.1, 1.0));
  FiberProblem p = FiberProblem::flat(g);
  p.density.divisor.points_B.push_back({0.41307, 0.59251, 0.5});
  p.density.epsilon = 0.1;
  p.lambda = lambda;
  return p;
}

void BM_FiberSolveLinear(benchmark::State& state) {
  const FiberProblem p = conic_problem(std::size_t(state.range(0)), 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_fiber(p));
}

void BM_FiberSolveTwisted(benchmark::State& state) {
  const FiberProblem p = conic_problem(std::size_t(state.range(0)), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_fiber(p));
}

}  // namespace

BENCHMARK(BM_PoissonSolve)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ThetaSectionNorm)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FiberSolveLinear)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FiberSolveTwisted)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
