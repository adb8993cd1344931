#include <benchmark/benchmark.h>

#include <vector>

#include "hopsim/core_model.hpp"

using namespace hopsim;

namespace {

std::vector<BinaryWord> sample_word(int bits) {
  std::vector<BinaryWord> d;
  RandomStream rng(3, 0);
  for (int l = 0; l < 9; ++l)
    d.push_back(make_word(
        static_cast<std::uint64_t>(rng.next_double() * (1ull << bits)), bits));
  return d;
}

WeightVector prewitt() {
  return weights_from_ticks(
      std::vector<std::int32_t>{-1, 0, 1, -1, 0, 1, -1, 0, 1});
}

void BM_HybridNoiseFree(benchmark::State& state) {
  auto bits = static_cast<int>(state.range(0));
  auto d = sample_word(bits);
  WeightVector w = prewitt();
  Channel chan;
  std::uint64_t word = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(hybrid_inner_product(d, w, chan, word++));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_HybridNoiseFree)->Arg(8)->Arg(16);

void BM_HybridWeightNoise(benchmark::State& state) {
  auto d = sample_word(8);
  WeightVector w = prewitt();
  Channel chan;
  chan.spec.mode = NoiseMode::kWeightSnr;
  chan.spec.snr_db = 25.0;
  std::uint64_t word = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(hybrid_inner_product(d, w, chan, word++));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_HybridWeightNoise);

void BM_HybridOsnr(benchmark::State& state) {
  auto d = sample_word(8);
  WeightVector w = prewitt();
  Channel chan;
  chan.spec.mode = NoiseMode::kOpticalOsnr;
  chan.spec.osnr_db = 30.0;
  chan.source_lane_count = 9;
  std::uint64_t word = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(hybrid_inner_product(d, w, chan, word++));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_HybridOsnr);

void BM_AnalogWeightNoise(benchmark::State& state) {
  std::vector<double> d(9, 0.5);
  WeightVector w = prewitt();
  Channel chan;
  chan.spec.mode = NoiseMode::kWeightSnr;
  chan.spec.snr_db = 25.0;
  std::uint64_t word = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(analog_inner_product(d, w, chan, word++));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_AnalogWeightNoise);

void BM_GaussianDraws(benchmark::State& state) {
  RandomStream rng(1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(rng.next_gaussian());
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_GaussianDraws);

}  // namespace

BENCHMARK_MAIN();
