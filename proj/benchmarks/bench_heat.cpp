#include <benchmark/benchmark.h>

#include "qheat/heat.hpp"
#include "qheat/spectrum.hpp"

using namespace qheat;

static void BM_TransitionProbability(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  const Complex u(0.5, 0.3);
  for (auto _ : state)
    benchmark::DoNotOptimize(heat::transition_probability(u, 2.0, l, l + 3));
}
BENCHMARK(BM_TransitionProbability)->Arg(20)->Arg(100)->Arg(300);

static void BM_HeatDistribution(benchmark::State& state) {
  const heat::HeatSetup setup(1.2, 0.2, 1.0, static_cast<int>(state.range(0)));
  const Complex u(0.5, 0.3);
  for (auto _ : state)
    benchmark::DoNotOptimize(heat::heat_distribution(setup, u, 2.0));
}
BENCHMARK(BM_HeatDistribution)->Arg(64)->Arg(128)->Arg(256);

static void BM_IntegralFt(benchmark::State& state) {
  const heat::HeatSetup setup(1.2, 0.2, 1.0, 128);
  const Complex u(0.5, 0.3);
  const auto dist = heat::heat_distribution(setup, u, 2.0);
  const double beff = heat::effective_beta(1.0, u, 2.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(heat::integral_ft_value(dist, beff - 1.2));
}
BENCHMARK(BM_IntegralFt);

static void BM_SteadyStateStats(benchmark::State& state) {
  const auto sd = spectral::SpectralDensity::semicircle(0.12, 0.03, 1.0);
  const auto bound = spectrum::find_bound_states(sd, 1.05);
  const auto asym = spectrum::asymptotic_state(sd, 1.05, 5.0, bound);
  const heat::HeatSetup setup(1.0, 5.0, 1.05, 64);
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(heat::steady_state_stats(setup, asym, t));
    t += 1.0;
  }
}
BENCHMARK(BM_SteadyStateStats);

BENCHMARK_MAIN();
