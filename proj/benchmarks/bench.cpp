#include <benchmark/benchmark.h>

#include "nvsim/engine.hpp"
#include "nvsim/sequences.hpp"

using namespace nvsim;

static void BM_BuildLiouvillian(benchmark::State& state) {
  ModelParams p;
  RateTable r;
  for (auto _ : state)
    benchmark::DoNotOptimize(build_liouvillian(p, r, 500.0, 1.0));
}
BENCHMARK(BM_BuildLiouvillian);

static void BM_MakePropagator(benchmark::State& state) {
  ModelParams p;
  RateTable r;
  const Liouvillian l = build_liouvillian(p, r, 500.0, 1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(make_propagator(l, 0.35));
}
BENCHMARK(BM_MakePropagator);

static void BM_PlTrace(benchmark::State& state) {
  ModelParams p;
  RateTable r;
  const Liouvillian l = build_liouvillian(p, r, 500.0, 1.0);
  const Matrix rho = basis_state(1, 0);
  PropagatorCache cache;
  for (auto _ : state)
    benchmark::DoNotOptimize(pl_trace(l, r, rho, 0.35, 0.005, &cache));
}
BENCHMARK(BM_PlTrace);

static void BM_RamseyPoint(benchmark::State& state) {
  ModelParams p;
  RateTable r;
  SimContext ctx(p, r, 400.0);
  const std::vector<double> thetas{0.0, 1.0, 2.0};
  for (auto _ : state)
    benchmark::DoNotOptimize(
        ramsey_experiment(RamseyKind::kLongitudinal, 0.6, thetas, ctx));
}
BENCHMARK(BM_RamseyPoint);
