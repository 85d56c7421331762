#include <benchmark/benchmark.h>

#include "synchrony/calibrate.hpp"
#include "synchrony/dynamics.hpp"
#include "synchrony/game.hpp"
#include "synchrony/graph.hpp"
#include "synchrony/recipes.hpp"
#include "synchrony/rng.hpp"

namespace {

using namespace synchrony;

void BM_SolveEquilibrium(benchmark::State& state) {
  const GameParams params{0.1, 0.15, 0.2, 0.9};
  for (auto _ : state) benchmark::DoNotOptimize(solve_equilibrium(params));
}
BENCHMARK(BM_SolveEquilibrium);

void BM_BruteForceEquilibrium(benchmark::State& state) {
  const GameParams params{0.1, 0.15, 0.2, 0.9};
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_equilibrium(params, 101));
}
BENCHMARK(BM_BruteForceEquilibrium);

void BM_SmallWorld(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(make_small_world({n, 6, 0.3, seed++}));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_SmallWorld)->Arg(50)->Arg(500);

void BM_Step(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Graph g = make_small_world({n, 6, 0.3, 1});
  SimConfig cfg;
  cfg.willingness = {0.85, 0.1};
  cfg.active_fraction = 0.6;
  cfg.initial_actors = InitialActorCount{1};
  SystemState s = init_state(g, cfg);
  EquilibriumProbs eq;
  eq.p_act_active = 0.85;
  eq.p_act_inactive = 0.1;
  for (auto _ : state) {
    s = step(s, g, eq, 0.5, {}, AffineLinkage::identity());
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_Step)->Arg(50)->Arg(500);

void BM_Run360(benchmark::State& state) {
  const Graph g = make_small_world({50, 6, 0.3, 1});
  SimConfig cfg;
  cfg.game = GameParams{0.3, 0.65, 0.35, 0.85};
  cfg.seed = 3;
  const auto driver = CycleDriver::sinusoid_with_period(30, 1.5707963267948966);
  for (auto _ : state)
    benchmark::DoNotOptimize(run(g, cfg, driver, 360, {}, false));
}
BENCHMARK(BM_Run360);

void BM_KdeDensity(benchmark::State& state) {
  Rng rng(5);
  std::vector<double> samples(state.range(0));
  for (double& s : samples) s = rng.normal(0.5, 0.1);
  const Kde1D kde(samples, BandwidthRule::Silverman);
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kde.density(x));
    x += 1e-4;
    if (x > 1.0) x = 0.0;
  }
}
BENCHMARK(BM_KdeDensity)->Arg(100)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
