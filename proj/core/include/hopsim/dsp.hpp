#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace hopsim {

// Fractionally spaced (T/2) linear feedforward equalizer trained by LMS.
// Tap length is odd so the main cursor sits at the center; symbol n is
// produced from the window centered on sample spacing*n + center, which
// compensates the filter group delay. With the center-spike initialization
// an untrained equalizer acts as pure decimation.
struct EqualizerConfig {
  int taps = 51;
  int samples_per_symbol = 2;
  double step_size = 1e-3;
};

struct EqualizerState {
  std::vector<double> taps;
  int samples_per_symbol = 2;
  double step_size = 1e-3;
  bool trained = false;

  int center() const { return (static_cast<int>(taps.size()) - 1) / 2; }
};

struct TrainResult {
  EqualizerState state;
  std::vector<double> mse_curve;  // squared error per training symbol
};

// First / one-past-last symbol index whose tap window fits inside an input
// of the given length.
int equalizer_first_symbol(int taps, int spacing);
int equalizer_symbol_end(std::size_t input_len, int taps, int spacing);

// Trains on rx (spacing samples per symbol) against the known reference
// sequence. Divergence (squared error above 10x the initial MSE for 100
// consecutive symbols) raises NumericalError with diagnostics.
TrainResult lms_train(std::span<const double> rx,
                      std::span<const double> reference,
                      const EqualizerConfig& config);

// FIR filtering plus decimation to one sample per symbol over the valid
// window range. Untrained state raises ConfigError.
std::vector<double> equalize(const EqualizerState& state,
                             std::span<const double> rx);

// Linear-phase windowed-sinc low-pass (Hamming window, 63 taps), DC gain
// normalized to 1. cutoff is the passband edge as a fraction of the Nyquist
// rate, 0 < cutoff < 1.
std::vector<double> lowpass_fir(std::span<const double> samples, double cutoff,
                                int taps = 63);
std::vector<double> lowpass_fir_taps(double cutoff, int taps = 63);

// Demo waveform path: multilevel symbols -> 2x zero-stuffed samples -> ISI
// FIR -> AWGN -> train -> equalize -> decide. This path is separate from the
// core simulation pipeline, which applies no equalization.
struct EqDemoConfig {
  std::vector<double> isi_taps = {1.0, 0.4, 0.2};
  double snr_db = 30.0;
  int taps = 51;
  double step_size = 1e-3;
  int train_symbols = 10000;
  int eval_symbols = 10000;
  int pam_levels = 7;  // symmetric alphabet scaled to [-1, 1]
  std::uint64_t seed = 0;
};

struct EqDemoResult {
  double pre_mse = 0.0;
  double post_mse = 0.0;
  double pre_ser = 0.0;
  double post_ser = 0.0;
  std::vector<double> mse_curve;
  EqualizerState state;
};

EqDemoResult run_eq_demo(const EqDemoConfig& config);

}  // namespace hopsim
