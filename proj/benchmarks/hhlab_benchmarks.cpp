#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "hhlab/constants.hpp"
#include "hhlab/function_space.hpp"
#include "hhlab/kernel.hpp"
#include "hhlab/quadrature.hpp"
#include "hhlab/sharpness.hpp"
#include "hhlab/verifier.hpp"

namespace {

using namespace hhlab;

struct BenchKernel {
  Kernel kernel;
  double r;
};

BenchKernel bench_kernel(int index) {
  switch (index) {
    case 0: return {Kernel::sum_power(1.0), 0.4};
    case 1: return {Kernel::log_ratio(1.5), 0.6};
    case 2: return {Kernel::min_diff(0.8, 0.5), 0.4};  // r must lie in (lambda - beta, beta)
    default: return {Kernel::abslog_sumpow(1.0), 0.5};
  }
}

void BM_KernelEvaluate(benchmark::State& state) {
  const Kernel k = bench_kernel(static_cast<int>(state.range(0))).kernel;
  std::vector<double> xs;
  for (int i = 0; i < 256; ++i) xs.push_back(std::exp(-8.0 + 16.0 * i / 255.0));
  for (auto _ : state) {
    double acc = 0.0;
    for (double x : xs) acc += k.evaluate(x, 1.0);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(xs.size()));
  state.SetLabel(k.name());
}
BENCHMARK(BM_KernelEvaluate)->DenseRange(0, 3);

void BM_ProfileMoment(benchmark::State& state) {
  const auto [k, r] = bench_kernel(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(profile_moment(k, r).value);
  state.SetLabel(k.name());
}
BENCHMARK(BM_ProfileMoment)->DenseRange(0, 3)->Unit(benchmark::kMicrosecond);

void BM_InteriorSingularity(benchmark::State& state) {
  IntegrandSpec spec = IntegrandSpec::of_node([](const Node& n) {
    const double d = n.anchor == 1.0 ? n.delta : n.u - 1.0;
    return std::pow(std::abs(d), -0.9) * std::exp(-n.u);
  });
  spec.features.push_back({1.0, PowerLaw{-0.9, 0}});
  for (auto _ : state) benchmark::DoNotOptimize(integrate(spec).value);
}
BENCHMARK(BM_InteriorSingularity)->Unit(benchmark::kMicrosecond);

void BM_CumulativeEvaluate(benchmark::State& state) {
  const TestFunction f = TestFunction::from_pieces(
      {{0.0, 1.0, 2.0, 0.3, 1.1}, {1.0, 4.0, 1.5, -0.2, 0.4}, {4.0, INFINITY, 3.0, 0.7, 1.3}});
  const CumulativeFunction F = cumulative(f, Direction::Forward);
  std::vector<double> xs;
  for (int i = 0; i < 256; ++i) xs.push_back(0.05 + 10.0 * i / 255.0);
  for (auto _ : state) {
    double acc = 0.0;
    for (double x : xs) acc += F(x);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(xs.size()));
}
BENCHMARK(BM_CumulativeEvaluate);

void BM_BilinearIntegral(benchmark::State& state) {
  const auto [k, r] = bench_kernel(static_cast<int>(state.range(0)));
  const ExponentConfig cfg = ExponentConfig::rs(2.0, r, k.lambda());
  const TestFunction f = TestFunction::exponential(1.0, 1.0);
  const TestFunction g = TestFunction::indicator(0.5, 3.0, 1.0);
  VerifyOptions opt;
  opt.chain = false;
  for (auto _ : state) benchmark::DoNotOptimize(verify_bilinear_integral(k, cfg, f, g, opt).ratio);
  state.SetLabel(k.name());
}
BENCHMARK(BM_BilinearIntegral)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_BilinearDiscrete(benchmark::State& state) {
  const Kernel k = Kernel::sum_power(1.5);
  const ExponentConfig cfg = ExponentConfig::rs(2.0, 0.6, 1.5);
  const TestSequence a = TestSequence::geometric(1.0, 0.9);
  VerifyOptions opt;
  opt.truncation = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(verify_bilinear_discrete(k, cfg, a, a, opt).ratio);
}
BENCHMARK(BM_BilinearDiscrete)->Arg(100)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_SharpnessSweep(benchmark::State& state) {
  const Kernel k = Kernel::sum_power(1.0);
  const ExponentConfig cfg = ExponentConfig::rs(2.0, 0.5, 1.0);
  const std::vector<double> eps{1e-1, 1e-2, 1e-3};
  for (auto _ : state) benchmark::DoNotOptimize(sharpness_sweep(k, cfg, eps).points.back().ratio);
}
BENCHMARK(BM_SharpnessSweep)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
