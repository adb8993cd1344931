#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "hopsim/channel.hpp"
#include "hopsim/dsp.hpp"
#include "hopsim/errors.hpp"
#include "hopsim/rng.hpp"

using namespace hopsim;

namespace {

// Zero-stuffed 2x oversampling of a symbol sequence.
std::vector<double> upsample2(const std::vector<double>& symbols) {
  std::vector<double> out(symbols.size() * 2, 0.0);
  for (std::size_t n = 0; n < symbols.size(); ++n) out[2 * n] = symbols[n];
  return out;
}

std::vector<double> random_symbols(int n, std::uint64_t seed) {
  RandomStream rng(seed, 0);
  std::vector<double> sym(static_cast<std::size_t>(n));
  for (double& s : sym) {
    int level = static_cast<int>(rng.next_double() * 7.0) - 3;
    s = level / 3.0;
  }
  return sym;
}

}  // namespace

TEST_CASE("identity channel: converged taps form a clean center spike") {
  auto sym = random_symbols(4000, 1);
  auto rx = upsample2(sym);
  EqualizerConfig cfg;
  TrainResult r = lms_train(rx, sym, cfg);
  int c = r.state.center();
  CHECK(r.state.taps[static_cast<std::size_t>(c)] >= 0.99);
  double off_energy = 0.0;
  for (int t = 0; t < static_cast<int>(r.state.taps.size()); ++t)
    if (t != c)
      off_energy += r.state.taps[static_cast<std::size_t>(t)] *
                    r.state.taps[static_cast<std::size_t>(t)];
  CHECK(off_energy <= 1e-3);
}

TEST_CASE("trained-on-identity equalizer acts as pure decimation") {
  auto sym = random_symbols(3000, 2);
  auto rx = upsample2(sym);
  TrainResult r = lms_train(rx, sym, EqualizerConfig{});
  auto out = equalize(r.state, rx);
  int first = equalizer_first_symbol(51, 2);
  for (std::size_t i = 0; i < out.size(); ++i)
    CHECK(out[i] ==
          doctest::Approx(sym[static_cast<std::size_t>(first) + i])
              .epsilon(1e-6));
}

TEST_CASE("zero step size leaves the initialization untouched") {
  auto sym = random_symbols(1000, 3);
  auto rx = upsample2(sym);
  EqualizerConfig cfg;
  cfg.step_size = 0.0;
  TrainResult r = lms_train(rx, sym, cfg);
  int c = r.state.center();
  for (int t = 0; t < static_cast<int>(r.state.taps.size()); ++t)
    CHECK(r.state.taps[static_cast<std::size_t>(t)] == (t == c ? 1.0 : 0.0));
}

TEST_CASE("equalizing an untrained state is a usage error") {
  EqualizerState state;
  state.taps.assign(51, 0.0);
  std::vector<double> rx(200, 0.0);
  CHECK_THROWS_AS(equalize(state, rx), ConfigError);
}

TEST_CASE("output length follows the documented trim") {
  auto sym = random_symbols(500, 4);
  auto rx = upsample2(sym);
  TrainResult r = lms_train(rx, sym, EqualizerConfig{});
  auto out = equalize(r.state, rx);
  int first = equalizer_first_symbol(51, 2);
  int end = equalizer_symbol_end(rx.size(), 51, 2);
  CHECK(static_cast<int>(out.size()) == end - first);
  CHECK(first == 13);  // ceil(25/2)
  CHECK(end == 488);   // floor((1000-1-25)/2) + 1
}

TEST_CASE("3-tap ISI at 30 dB: equalization cuts MSE by 10x or better") {
  EqDemoConfig cfg;
  cfg.seed = 5;
  EqDemoResult r = run_eq_demo(cfg);
  CHECK(r.post_mse <= 0.1 * r.pre_mse);
  CHECK(r.post_ser < r.pre_ser);
}

TEST_CASE("training MSE is reproducible and applies to its own data") {
  auto sym = random_symbols(8000, 6);
  auto rx_clean = upsample2(sym);
  std::vector<double> isi = {1.0, 0.4, 0.2};
  auto rx = apply_isi(rx_clean, isi);
  RandomStream noise(9, 0);
  for (double& v : rx) v += 0.01 * noise.next_gaussian();

  TrainResult r = lms_train(rx, sym, EqualizerConfig{});
  // Final training MSE: mean of the last 1000 squared errors.
  double final_mse = 0.0;
  std::size_t tail = 1000;
  for (std::size_t i = r.mse_curve.size() - tail; i < r.mse_curve.size(); ++i)
    final_mse += r.mse_curve[i];
  final_mse /= static_cast<double>(tail);

  auto out = equalize(r.state, rx);
  int first = equalizer_first_symbol(51, 2);
  double mse = 0.0;
  std::size_t n = 0;
  for (std::size_t i = out.size() / 2; i < out.size(); ++i) {
    double e = out[i] - sym[static_cast<std::size_t>(first) + i];
    mse += e * e;
    ++n;
  }
  mse /= static_cast<double>(n);
  CHECK(mse <= final_mse * 1.1 + 1e-9);
}

TEST_CASE("filters are linear") {
  RandomStream rng(10, 0);
  std::vector<double> x(256), y(256);
  for (int i = 0; i < 256; ++i) {
    x[static_cast<std::size_t>(i)] = rng.next_gaussian();
    y[static_cast<std::size_t>(i)] = rng.next_gaussian();
  }
  double a = 1.7, b = -0.6;
  std::vector<double> combo(256);
  for (int i = 0; i < 256; ++i)
    combo[static_cast<std::size_t>(i)] = a * x[static_cast<std::size_t>(i)] +
                                         b * y[static_cast<std::size_t>(i)];
  auto fx = lowpass_fir(x, 0.4);
  auto fy = lowpass_fir(y, 0.4);
  auto fc = lowpass_fir(combo, 0.4);
  for (int i = 0; i < 256; ++i)
    CHECK(fc[static_cast<std::size_t>(i)] ==
          doctest::Approx(a * fx[static_cast<std::size_t>(i)] +
                          b * fy[static_cast<std::size_t>(i)])
              .epsilon(1e-9));
}

TEST_CASE("low-pass filter: unit DC gain, symmetry, stopband attenuation") {
  std::vector<double> ones(300, 1.0);
  auto dc = lowpass_fir(ones, 0.25);
  // Interior samples (edges see the zero padding).
  for (std::size_t i = 100; i < 200; ++i)
    CHECK(dc[i] == doctest::Approx(1.0).epsilon(1e-6));

  auto taps = lowpass_fir_taps(0.25, 63);
  for (std::size_t k = 0; k < taps.size(); ++k)
    CHECK(taps[k] == doctest::Approx(taps[taps.size() - 1 - k]).epsilon(1e-12));

  // Nyquist-rate alternating input, attenuated by >= 20 dB.
  std::vector<double> alt(400);
  for (int i = 0; i < 400; ++i)
    alt[static_cast<std::size_t>(i)] = (i % 2 == 0) ? 1.0 : -1.0;
  auto filtered = lowpass_fir(alt, 0.25);
  double peak = 0.0;
  for (std::size_t i = 100; i < 300; ++i)
    peak = std::max(peak, std::fabs(filtered[i]));
  CHECK(peak < 0.1);  // -20 dB

  CHECK_THROWS_AS(lowpass_fir(ones, 1.5), ConfigError);
  CHECK_THROWS_AS(lowpass_fir(ones, 0.0), ConfigError);
}

TEST_CASE("divergent step size raises a training error") {
  auto sym = random_symbols(6000, 11);
  auto rx = upsample2(sym);
  std::vector<double> isi = {1.0, 0.4, 0.2};
  rx = apply_isi(rx, isi);
  EqualizerConfig cfg;
  cfg.step_size = 1.5;  // far beyond the stability bound
  CHECK_THROWS_AS(lms_train(rx, sym, cfg), NumericalError);
}

TEST_CASE("stable step sizes never raise the long-run MSE across seeds") {
  for (std::uint64_t seed : {100ull, 200ull, 300ull, 400ull, 500ull}) {
    auto sym = random_symbols(8000, seed);
    auto rx_clean = upsample2(sym);
    std::vector<double> isi = {1.0, 0.4, 0.2};
    auto rx = apply_isi(rx_clean, isi);
    RandomStream noise(seed + 1, 0);
    for (double& v : rx) v += 0.02 * noise.next_gaussian();
    TrainResult r = lms_train(rx, sym, EqualizerConfig{});
    auto block_mse = [&](std::size_t from, std::size_t to) {
      double acc = 0.0;
      for (std::size_t i = from; i < to; ++i) acc += r.mse_curve[i];
      return acc / static_cast<double>(to - from);
    };
    double early = block_mse(0, 500);
    double late = block_mse(r.mse_curve.size() - 500, r.mse_curve.size());
    CHECK(late <= early);
  }
}
