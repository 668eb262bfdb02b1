#include <benchmark/benchmark.h>

#include "qheat/spectral.hpp"

using namespace qheat;

static void BM_OhmicMemoryKernel(benchmark::State& state) {
  const auto sd = spectral::SpectralDensity::ohmic(0.05, 1.0, 10.0);
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sd.memory_kernel(t));
    t += 1e-3;
  }
}
BENCHMARK(BM_OhmicMemoryKernel);

static void BM_OhmicNoiseKernelPoint(benchmark::State& state) {
  const auto sd = spectral::SpectralDensity::ohmic(0.05, 1.0, 10.0);
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sd.noise_kernel(0.2, t));
    t = t < 20.0 ? t + 0.25 : 0.0;
  }
}
BENCHMARK(BM_OhmicNoiseKernelPoint);

static void BM_SampleKernels(benchmark::State& state) {
  const auto sd = spectral::SpectralDensity::ohmic(0.05, 1.0, 10.0);
  const int n = static_cast<int>(state.range(0));
  std::vector<double> times(n + 1);
  for (int i = 0; i <= n; ++i) times[i] = i * (30.0 / n);
  for (auto _ : state)
    benchmark::DoNotOptimize(spectral::sample_kernels(sd, 0.2, times));
  state.SetComplexityN(n);
}
BENCHMARK(BM_SampleKernels)->Arg(1000)->Arg(2000)->Arg(4000)->Complexity(benchmark::oN);

static void BM_LambShiftSemicircle(benchmark::State& state) {
  const auto sd = spectral::SpectralDensity::semicircle(0.12, 0.03, 1.0);
  double w = 0.95;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sd.lamb_shift(w));
    w = w < 1.05 ? w + 1e-4 : 0.95;
  }
}
BENCHMARK(BM_LambShiftSemicircle);
