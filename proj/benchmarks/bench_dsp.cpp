#include <benchmark/benchmark.h>

#include <vector>

#include "hopsim/channel.hpp"
#include "hopsim/dsp.hpp"
#include "hopsim/rng.hpp"

using namespace hopsim;

namespace {

std::vector<double> demo_rx(int symbols, std::vector<double>& ref) {
  RandomStream rng(2, 0);
  ref.resize(static_cast<std::size_t>(symbols));
  for (double& s : ref)
    s = (static_cast<int>(rng.next_double() * 7.0) - 3) / 3.0;
  std::vector<double> tx(ref.size() * 2, 0.0);
  for (std::size_t n = 0; n < ref.size(); ++n) tx[2 * n] = ref[n];
  std::vector<double> isi = {1.0, 0.4, 0.2};
  auto rx = apply_isi(tx, isi);
  RandomStream noise(3, 0);
  for (double& v : rx) v += 0.02 * noise.next_gaussian();
  return rx;
}

void BM_LmsTrain(benchmark::State& state) {
  std::vector<double> ref;
  auto rx = demo_rx(static_cast<int>(state.range(0)), ref);
  EqualizerConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(lms_train(rx, ref, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LmsTrain)->Arg(10000);

void BM_Equalize(benchmark::State& state) {
  std::vector<double> ref;
  auto rx = demo_rx(10000, ref);
  TrainResult trained = lms_train(rx, ref, EqualizerConfig{});
  for (auto _ : state) benchmark::DoNotOptimize(equalize(trained.state, rx));
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_Equalize);

void BM_LowpassFir(benchmark::State& state) {
  RandomStream rng(4, 0);
  std::vector<double> x(16384);
  for (double& v : x) v = rng.next_gaussian();
  for (auto _ : state) benchmark::DoNotOptimize(lowpass_fir(x, 0.25));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(x.size()));
}
BENCHMARK(BM_LowpassFir);

}  // namespace
