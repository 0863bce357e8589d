#include <benchmark/benchmark.h>

#include <numbers>

#include "xypurify/cavity.hpp"
#include "xypurify/montecarlo.hpp"
#include "xypurify/purification.hpp"
#include "xypurify/xy_dynamics.hpp"

namespace xp = xypurify;

static void BM_EvolveComposite(benchmark::State& state) {
  const xp::XYHamiltonian h = xp::build_xy(1.0);
  double t = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(xp::evolve_composite(h, t));
    t += 1e-6;
  }
}
BENCHMARK(BM_EvolveComposite);

static void BM_RunRound(benchmark::State& state) {
  const xp::DensityMatrix stored = xp::werner(0.75, xp::kStationaryPair);
  const double T = std::numbers::pi / 6.0;
  for (auto _ : state) benchmark::DoNotOptimize(xp::run_round({0.75, stored, T, 1.0}));
}
BENCHMARK(BM_RunRound)->Unit(benchmark::kMillisecond);

static void BM_IntegrateFull(benchmark::State& state) {
  const double d = xp::solve_geometry(1.0, 1.0);
  const xp::CavityGeometry g = xp::CavityGeometry::centered(1.0, 1.0, 1.0, d, 1.0, static_cast<double>(state.range(0)));
  xp::AmplitudeState start;
  start.c[1] = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(xp::integrate_full(g, start, xp::default_window(g)));
}
BENCHMARK(BM_IntegrateFull)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_MonteCarloTrials(benchmark::State& state) {
  xp::ProtocolConfig c;
  c.f = 0.75;
  c.target_rounds = 4;
  for (auto _ : state) benchmark::DoNotOptimize(xp::run_trials(c, state.range(0), 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MonteCarloTrials)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
