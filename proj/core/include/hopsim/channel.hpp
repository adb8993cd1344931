#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hopsim/model_types.hpp"
#include "hopsim/rng.hpp"

namespace hopsim {

enum class NoiseMode { kNoiseFree, kElectricalSnr, kWeightSnr, kOpticalOsnr };

std::string to_string(NoiseMode mode);
NoiseMode noise_mode_from_string(const std::string& name);

// Noise configuration. Exactly one mode is active; the seed fully determines
// every random draw (per-word philox streams, see rng.hpp).
struct ChannelSpec {
  NoiseMode mode = NoiseMode::kNoiseFree;
  double snr_db = 0.0;   // electrical-snr / weight-snr modes
  double osnr_db = 0.0;  // optical-osnr mode, 12.5 GHz reference bandwidth
  std::vector<double> isi_taps;  // optional linear ISI, empty = transparent
  std::uint64_t seed = 0;
};

// sigma = signal_rms * 10^(-snr_db / 20). The reference convention:
// weight-noise SNR against the RMS of the nonzero nominal weights,
// electrical SNR against the AC-coupled RMS of the ideal multilevel signal
// over the whole workload (one value per run).
double sigma_from_snr(double signal_rms, double snr_db);

// RMS of the nonzero entries of the nominal (quantized) weights.
double nonzero_weight_rms(const WeightVector& weights);

// ASE field variance per lane: (source_lanes / 2) * 10^(-osnr_db / 10) in
// units of one comb line's power. OSNR is referenced to the total source
// power; the co-polarized half of the unpolarized ASE beats with the signal;
// receiver noise bandwidth equals the 12.5 GHz reference bandwidth.
double ase_variance(double osnr_db, int source_lanes);

// Channel runtime: the spec plus workload-level references resolved by the
// orchestrator before any word is processed.
struct Channel {
  ChannelSpec spec;

  // Required for kElectricalSnr: AC-coupled RMS of the ideal frame
  // population (per-measurement DC removed, pooled over the workload).
  std::optional<double> electrical_ref_rms;

  // Lanes lit in the light source; defaults to the operator size when 0.
  // Split measurements keep the full comb, so this stays at the unsplit L.
  int source_lane_count = 0;

  RandomStream stream_for_word(std::uint64_t word_index) const {
    return RandomStream(spec.seed, word_index);
  }
  bool noisy() const { return spec.mode != NoiseMode::kNoiseFree; }
  double electrical_sigma() const;
};

// Per-word weight perturbation: w_l + n_l, n_l ~ N(0, sigma^2) iid per lane,
// sigma = sigma_from_snr(rms of nonzero nominal weights, snr_db).
std::vector<double> apply_weight_noise(const WeightVector& weights,
                                       double snr_db, RandomStream& rng);

// Adds iid N(0, sigma^2) to every sample.
void apply_electrical_awgn(MultilevelFrame& frame, double sigma,
                           RandomStream& rng);

// Per-lane detected intensity |sqrt(P) + n_c|^2 with complex ASE n_c of
// variance sigma_ase^2 (mean detected intensity is P + sigma_ase^2).
std::vector<double> apply_optical_osnr(std::span<const double> lane_powers,
                                       double osnr_db, int source_lanes,
                                       RandomStream& rng);

// Linear convolution with zero-padded edges, output length = input length.
std::vector<double> apply_isi(std::span<const double> samples,
                              std::span<const double> taps);

}  // namespace hopsim
