#include <benchmark/benchmark.h>

#include "qheat/propagator.hpp"
#include "qheat/spectral.hpp"

using namespace qheat;

namespace {
const spectral::SpectralDensity& fig2() {
  static const auto sd = spectral::SpectralDensity::ohmic(0.05, 1.0, 10.0);
  return sd;
}
}  // namespace

// O(n^2) memory convolution
static void BM_SolveU(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const propagator::TimeGrid grid(30.0, n);
  const auto samples = spectral::sample_kernels(fig2(), 0.2, grid.times());
  for (auto _ : state)
    benchmark::DoNotOptimize(propagator::solve_u(samples.mu, 1.0, grid));
  state.SetComplexityN(n);
}
BENCHMARK(BM_SolveU)->Arg(1000)->Arg(2000)->Arg(4000)->Complexity(benchmark::oNSquared);

static void BM_SolveV(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const propagator::TimeGrid grid(30.0, n);
  const auto samples = spectral::sample_kernels(fig2(), 0.2, grid.times());
  const auto u = propagator::solve_u(samples.mu, 1.0, grid);
  for (auto _ : state)
    benchmark::DoNotOptimize(propagator::solve_v(samples.nu, u, grid));
  state.SetComplexityN(n);
}
BENCHMARK(BM_SolveV)->Arg(1000)->Arg(2000)->Arg(4000)->Complexity(benchmark::oNSquared);

static void BM_MasterCoefficients(benchmark::State& state) {
  const propagator::TimeGrid grid(10.0, 2000);
  const auto traj = propagator::solve_trajectory(fig2(), 1.0, 0.2, grid);
  for (auto _ : state)
    benchmark::DoNotOptimize(propagator::master_coefficients(traj));
}
BENCHMARK(BM_MasterCoefficients);
