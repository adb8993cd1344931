#include "hopsim/dsp.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "hopsim/channel.hpp"
#include "hopsim/errors.hpp"
#include "hopsim/rng.hpp"

namespace hopsim {

namespace {

void check_config(const EqualizerConfig& config) {
  if (config.taps < 1 || config.taps % 2 == 0)
    throw ConfigError("equalizer tap count must be odd and positive, got " +
                      std::to_string(config.taps));
  if (config.samples_per_symbol < 1)
    throw ConfigError("samples per symbol must be >= 1");
  if (config.step_size < 0.0)
    throw ConfigError("LMS step size must be non-negative");
}

// y_n = sum_t w[t] * rx[spacing*n + center - t]
double filter_at(const std::vector<double>& taps, std::span<const double> rx,
                 int spacing, int n) {
  int center = (static_cast<int>(taps.size()) - 1) / 2;
  int base = spacing * n + center;
  double acc = 0.0;
  for (int t = 0; t < static_cast<int>(taps.size()); ++t)
    acc += taps[static_cast<std::size_t>(t)] *
           rx[static_cast<std::size_t>(base - t)];
  return acc;
}

}  // namespace

int equalizer_first_symbol(int taps, int spacing) {
  int center = (taps - 1) / 2;
  return (center + spacing - 1) / spacing;  // ceil(center / spacing)
}

int equalizer_symbol_end(std::size_t input_len, int taps, int spacing) {
  int center = (taps - 1) / 2;
  // Largest n with spacing*n + center < input_len.
  auto last = (static_cast<long long>(input_len) - 1 - center) / spacing;
  return static_cast<int>(last + 1);
}

TrainResult lms_train(std::span<const double> rx,
                      std::span<const double> reference,
                      const EqualizerConfig& config) {
  check_config(config);
  const int spacing = config.samples_per_symbol;
  if (rx.size() < static_cast<std::size_t>(spacing) * reference.size())
    throw DimensionError("rx too short: need >= spacing * reference length");

  TrainResult result;
  result.state.samples_per_symbol = spacing;
  result.state.step_size = config.step_size;
  result.state.taps.assign(static_cast<std::size_t>(config.taps), 0.0);
  result.state.taps[static_cast<std::size_t>((config.taps - 1) / 2)] = 1.0;

  const int first = equalizer_first_symbol(config.taps, spacing);
  const int end = std::min<int>(static_cast<int>(reference.size()),
                                equalizer_symbol_end(rx.size(), config.taps,
                                                     spacing));
  const int center = (config.taps - 1) / 2;

  double initial_mse = 0.0;
  int warmup = 0;
  int over_count = 0;
  result.mse_curve.reserve(static_cast<std::size_t>(end - first));
  for (int n = first; n < end; ++n) {
    double y = filter_at(result.state.taps, rx, spacing, n);
    double e = reference[static_cast<std::size_t>(n)] - y;
    double e2 = e * e;
    result.mse_curve.push_back(e2);

    if (warmup < 100) {
      initial_mse += e2;
      ++warmup;
      if (warmup == 100) initial_mse /= 100.0;
    } else if (initial_mse > 0.0) {
      over_count = e2 > 10.0 * initial_mse ? over_count + 1 : 0;
      if (over_count >= 100)
        throw NumericalError(
            "LMS training diverged: squared error above 10x the initial MSE "
            "(" + std::to_string(initial_mse) + ") for 100 consecutive "
            "symbols at symbol " + std::to_string(n) +
            "; reduce the step size (" + std::to_string(config.step_size) +
            ")");
    }

    if (config.step_size > 0.0) {
      int base = spacing * n + center;
      for (int t = 0; t < config.taps; ++t)
        result.state.taps[static_cast<std::size_t>(t)] +=
            config.step_size * e * rx[static_cast<std::size_t>(base - t)];
    }
  }
  result.state.trained = true;
  return result;
}

std::vector<double> equalize(const EqualizerState& state,
                             std::span<const double> rx) {
  if (!state.trained)
    throw ConfigError("equalize called with an untrained equalizer");
  const int taps = static_cast<int>(state.taps.size());
  const int spacing = state.samples_per_symbol;
  const int first = equalizer_first_symbol(taps, spacing);
  const int end = equalizer_symbol_end(rx.size(), taps, spacing);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(std::max(0, end - first)));
  for (int n = first; n < end; ++n)
    out.push_back(filter_at(state.taps, rx, spacing, n));
  return out;
}

std::vector<double> lowpass_fir_taps(double cutoff, int taps) {
  if (!(cutoff > 0.0) || !(cutoff < 1.0))
    throw ConfigError("low-pass cutoff must be in (0, 1) of the Nyquist rate");
  if (taps < 3 || taps % 2 == 0)
    throw ConfigError("low-pass tap count must be odd and >= 3");
  const double fc = cutoff / 2.0;  // cycles per sample
  const int center = (taps - 1) / 2;
  std::vector<double> h(static_cast<std::size_t>(taps));
  double sum = 0.0;
  for (int k = 0; k < taps; ++k) {
    double x = k - center;
    double sinc = x == 0.0 ? 2.0 * fc
                           : std::sin(2.0 * std::numbers::pi * fc * x) /
                                 (std::numbers::pi * x);
    double window = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * k /
                                           (taps - 1));
    h[static_cast<std::size_t>(k)] = sinc * window;
    sum += h[static_cast<std::size_t>(k)];
  }
  for (double& v : h) v /= sum;  // unit DC gain
  return h;
}

std::vector<double> lowpass_fir(std::span<const double> samples, double cutoff,
                                int taps) {
  std::vector<double> h = lowpass_fir_taps(cutoff, taps);
  const int center = (taps - 1) / 2;
  std::vector<double> out(samples.size(), 0.0);
  for (std::size_t n = 0; n < samples.size(); ++n) {
    double acc = 0.0;
    for (int t = 0; t < taps; ++t) {
      long long idx = static_cast<long long>(n) + center - t;
      if (idx >= 0 && idx < static_cast<long long>(samples.size()))
        acc += h[static_cast<std::size_t>(t)] *
               samples[static_cast<std::size_t>(idx)];
    }
    out[n] = acc;
  }
  return out;
}

EqDemoResult run_eq_demo(const EqDemoConfig& config) {
  if (config.pam_levels < 2)
    throw ConfigError("PAM alphabet needs >= 2 levels");
  if (config.train_symbols < 200 || config.eval_symbols < 1)
    throw ConfigError("eq demo needs >= 200 training and >= 1 eval symbols");
  if (config.isi_taps.empty()) throw ConfigError("ISI taps must be non-empty");

  const int total = config.train_symbols + config.eval_symbols;
  const int spacing = 2;
  const int half = (config.pam_levels - 1) / 2;
  const double scale = half > 0 ? 1.0 / half : 1.0;

  RandomStream sym_rng(config.seed, 0);
  std::vector<double> symbols(static_cast<std::size_t>(total));
  for (double& s : symbols) {
    int level = static_cast<int>(sym_rng.next_double() * config.pam_levels) -
                half;
    s = level * scale;
  }

  // Zero-stuffed 2 samples/symbol, ISI at sample rate, AWGN against the
  // AC RMS of the noise-free received waveform.
  std::vector<double> tx(static_cast<std::size_t>(total) * spacing, 0.0);
  for (int n = 0; n < total; ++n)
    tx[static_cast<std::size_t>(n) * spacing] =
        symbols[static_cast<std::size_t>(n)];
  std::vector<double> clean = apply_isi(tx, config.isi_taps);

  double mean = 0.0;
  for (double v : clean) mean += v;
  mean /= static_cast<double>(clean.size());
  double var = 0.0;
  for (double v : clean) var += (v - mean) * (v - mean);
  var /= static_cast<double>(clean.size());
  double sigma = sigma_from_snr(std::sqrt(var), config.snr_db);

  RandomStream noise_rng(config.seed, 1);
  std::vector<double> rx = clean;
  for (double& v : rx) v += sigma * noise_rng.next_gaussian();

  EqualizerConfig eq_config;
  eq_config.taps = config.taps;
  eq_config.samples_per_symbol = spacing;
  eq_config.step_size = config.step_size;

  const std::size_t train_samples =
      static_cast<std::size_t>(config.train_symbols) * spacing;
  std::span<const double> rx_train(rx.data(), train_samples);
  std::span<const double> ref_train(symbols.data(),
                                    static_cast<std::size_t>(
                                        config.train_symbols));
  TrainResult trained = lms_train(rx_train, ref_train, eq_config);

  // Evaluate on the held-out tail.
  std::span<const double> rx_eval(rx.data() + train_samples,
                                  rx.size() - train_samples);
  std::vector<double> eq_out = equalize(trained.state, rx_eval);
  const int first = equalizer_first_symbol(config.taps, spacing);

  auto decide = [&](double v) {
    double scaled = v / scale;
    double k = scaled >= 0.0 ? std::floor(scaled + 0.5)
                             : std::ceil(scaled - 0.5);
    int level = static_cast<int>(k);
    level = std::clamp(level, -half, half);
    return level;
  };

  EqDemoResult result;
  result.state = trained.state;
  result.mse_curve = std::move(trained.mse_curve);

  double pre_acc = 0.0, post_acc = 0.0;
  std::int64_t pre_err = 0, post_err = 0, n_eval = 0;
  for (std::size_t i = 0; i < eq_out.size(); ++i) {
    std::size_t sym_idx = static_cast<std::size_t>(config.train_symbols) +
                          static_cast<std::size_t>(first) + i;
    if (sym_idx >= symbols.size()) break;
    double want = symbols[sym_idx];
    double raw = rx_eval[(static_cast<std::size_t>(first) + i) * spacing];
    double post = eq_out[i];
    pre_acc += (raw - want) * (raw - want);
    post_acc += (post - want) * (post - want);
    if (decide(raw) != decide(want)) ++pre_err;
    if (decide(post) != decide(want)) ++post_err;
    ++n_eval;
  }
  if (n_eval == 0) throw ConfigError("eq demo evaluation window is empty");
  result.pre_mse = pre_acc / static_cast<double>(n_eval);
  result.post_mse = post_acc / static_cast<double>(n_eval);
  result.pre_ser = static_cast<double>(pre_err) / static_cast<double>(n_eval);
  result.post_ser =
      static_cast<double>(post_err) / static_cast<double>(n_eval);
  return result;
}

}  // namespace hopsim
