// Cost of the main building blocks on the default three-wave setup.

#include <vector>

#include <benchmark/benchmark.h>

#include "wdoa/estimator.hpp"

using namespace wdoa;

namespace {

const SnapshotSet& data() {
  static const SnapshotSet set = [] {
    auto sc = ScenarioConfig::three_waves();
    sc.snr_db = 20.0;
    return generate_snapshots(sc, ArrayConfig::uniform_linear(10));
  }();
  return set;
}

const std::vector<double> kGamma{-0.7, -0.62, 0.28};

void BM_Simulate(benchmark::State& state) {
  auto sc = ScenarioConfig::three_waves();
  const auto array = ArrayConfig::uniform_linear(10);
  for (auto _ : state) benchmark::DoNotOptimize(generate_snapshots(sc, array));
}
BENCHMARK(BM_Simulate)->Unit(benchmark::kMillisecond);

void BM_CostExact(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(cost_exact(data(), kGamma));
}
BENCHMARK(BM_CostExact)->Unit(benchmark::kMicrosecond);

void BM_CompressCheb(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(compress_cheb(data(), order));
}
BENCHMARK(BM_CompressCheb)->Arg(6)->Arg(10)->Unit(benchmark::kMicrosecond);

void BM_CompressBin(benchmark::State& state) {
  const int bins = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(compress_bin(data(), bins));
}
BENCHMARK(BM_CompressBin)->Arg(60)->Unit(benchmark::kMicrosecond);

void BM_CostCheb(benchmark::State& state) {
  const auto corr = compress_cheb(data(), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(cost_cheb(corr, kGamma));
}
BENCHMARK(BM_CostCheb)->Arg(6)->Arg(10)->Unit(benchmark::kMicrosecond);

void BM_CostBin(benchmark::State& state) {
  const auto corr = compress_bin(data(), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(cost_bin(corr, kGamma));
}
BENCHMARK(BM_CostBin)->Arg(60)->Unit(benchmark::kMicrosecond);

void BM_GradientHessian(benchmark::State& state) {
  const auto corr = compress_cheb(data(), 6);
  for (auto _ : state) benchmark::DoNotOptimize(mvp_gradient_hessian(corr, kGamma));
}
BENCHMARK(BM_GradientHessian)->Unit(benchmark::kMicrosecond);

void BM_BeamformerSearch(benchmark::State& state) {
  const auto corr = compress_cheb(data(), 6);
  const SearchConfig search;
  const std::vector<double> fixed{-0.7, 0.28};
  for (auto _ : state) {
    const auto ps = extended_beamformer_grid(corr, fixed, search);
    benchmark::DoNotOptimize(locate_minima(ps, 1, search));
  }
}
BENCHMARK(BM_BeamformerSearch)->Unit(benchmark::kMicrosecond);

void BM_KnownK(benchmark::State& state) {
  const auto corr = compress_cheb(data(), 6);
  const auto det = DetectorConfig::for_snapshots(data());
  for (auto _ : state) benchmark::DoNotOptimize(estimate_known_k(corr, 3, det, SearchConfig{}));
}
BENCHMARK(BM_KnownK)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
