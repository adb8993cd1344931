#include <benchmark/benchmark.h>

#include "hopsim/imaging.hpp"

using namespace hopsim;

namespace {

void BM_OracleConvolve(benchmark::State& state) {
  auto side = static_cast<int>(state.range(0));
  Image img = make_test_image(side, side, 8, 9);
  const Kernel& k = kernel("prewitt_v");
  for (auto _ : state) benchmark::DoNotOptimize(convolve_oracle(img, k));
  state.SetItemsProcessed(state.iterations() * (side - 2) * (side - 2));
}
BENCHMARK(BM_OracleConvolve)->Arg(64)->Arg(256);

void BM_HybridConvolveNoiseFree(benchmark::State& state) {
  auto side = static_cast<int>(state.range(0));
  Image img = make_test_image(side, side, 8, 9);
  ConvolveOptions opt;
  for (auto _ : state)
    benchmark::DoNotOptimize(convolve_sim(img, kernel("prewitt_v"), opt));
  state.SetItemsProcessed(state.iterations() * (side - 2) * (side - 2));
}
BENCHMARK(BM_HybridConvolveNoiseFree)->Arg(64)->Arg(128);

void BM_HybridConvolveElectrical(benchmark::State& state) {
  auto side = static_cast<int>(state.range(0));
  Image img = make_test_image(side, side, 16, 9);
  ConvolveOptions opt;
  opt.split_groups = 3;
  opt.channel.mode = NoiseMode::kElectricalSnr;
  opt.channel.snr_db = 18.2;
  for (auto _ : state)
    benchmark::DoNotOptimize(convolve_sim(img, kernel("prewitt_v"), opt));
  state.SetItemsProcessed(state.iterations() * (side - 2) * (side - 2));
}
BENCHMARK(BM_HybridConvolveElectrical)->Arg(64);

void BM_PatchExtraction(benchmark::State& state) {
  Image img = make_test_image(451, 300, 8, 9);
  for (auto _ : state) benchmark::DoNotOptimize(extract_patches(img));
  state.SetItemsProcessed(state.iterations() * 133802);
}
BENCHMARK(BM_PatchExtraction);

}  // namespace
