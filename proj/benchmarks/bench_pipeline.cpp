#include <benchmark/benchmark.h>

#include "tpex/noise.hpp"
#include "tpex/recovery.hpp"

namespace {

using namespace tpex;

SumFrequencySpectrum comb() {
  const std::vector<CombLine> lines{{739.55, 0.08, 0.6}, {739.90, 0.08, 1.0}, {740.25, 0.08, 0.45},
                                    {740.60, 0.08, 0.8}, {740.95, 0.08, 0.3}};
  return comb_pump_spectrum(make_frequency_grid(739.0, 0.001, 2501), lines);
}

void BM_SimulateInterferogram(benchmark::State& state) {
  const auto spectrum = comb();
  const auto grid = centered_time_grid(5e-4, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(simulate_interferogram(spectrum, grid, {1}));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 2501);
}
BENCHMARK(BM_SimulateInterferogram)->Arg(4096)->Arg(65536)->Unit(benchmark::kMillisecond);

void BM_FourierRecover(benchmark::State& state) {
  const auto grid = centered_time_grid(5e-4, static_cast<std::size_t>(state.range(0)));
  const auto trace = correlation_trace(simulate_interferogram(comb(), grid));
  for (auto _ : state) benchmark::DoNotOptimize(fold_one_sided(fourier_recover(trace)));
}
BENCHMARK(BM_FourierRecover)->Arg(4096)->Arg(65536)->Unit(benchmark::kMillisecond);

void BM_SampleCounts(benchmark::State& state) {
  const auto p = simulate_interferogram(comb(), default_time_grid());
  NoiseConfig config;
  config.pairs_per_bin = static_cast<std::uint64_t>(state.range(0));
  config.threads = 1;
  std::uint64_t stream = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_counts(p, config, stream++));
}
BENCHMARK(BM_SampleCounts)->Arg(1000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
