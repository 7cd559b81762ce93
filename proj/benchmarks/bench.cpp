#include <benchmark/benchmark.h>

#include <vector>

#include "dmkdv/lattice.hpp"
#include "dmkdv/model.hpp"
#include "dmkdv/scattering.hpp"
#include "dmkdv/weights.hpp"

using namespace dmkdv;

static void BM_Rhs(benchmark::State& state) {
  const LatticeState q = InitialProfile{}.realize(state.range(0));
  std::vector<double> out(q.size());
  for (auto _ : state) {
    rhs(q.values(), out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(q.size()));
}
BENCHMARK(BM_Rhs)->Arg(256)->Arg(2048);

static void BM_Integrate(benchmark::State& state) {
  const LatticeState q = InitialProfile{}.realize(200);
  for (auto _ : state) benchmark::DoNotOptimize(integrate(q, 1.0, 0.005));
}
BENCHMARK(BM_Integrate)->Unit(benchmark::kMillisecond);

static void BM_ReflectionGrid(benchmark::State& state) {
  std::vector<double> v(static_cast<std::size_t>(state.range(0)), 0.2);
  const LatticeState q(0, v);
  for (auto _ : state) benchmark::DoNotOptimize(reflection_grid(q, 256));
}
BENCHMARK(BM_ReflectionGrid)->Arg(1)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_DeltaAt(benchmark::State& state) {
  const ReflectionFunction r(LatticeState(-1, {0.2, 0.3, -0.1}));
  const ReflectionEvaluator eval = [&](cplx z) { return r(z); };
  const auto set = stationary_points({200, 400.0});
  for (auto _ : state) benchmark::DoNotOptimize(delta_at(eval, set, 0.0));
}
BENCHMARK(BM_DeltaAt)->Unit(benchmark::kMicrosecond);

static void BM_Evaluate(benchmark::State& state) {
  const AsymptoticEvaluator eval(LatticeState(0, {0.3}));
  for (auto _ : state) benchmark::DoNotOptimize(eval.evaluate(400, 800.0));
}
BENCHMARK(BM_Evaluate)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
