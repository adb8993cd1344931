#include "hopsim/channel.hpp"

#include <cmath>

#include "hopsim/errors.hpp"

namespace hopsim {

std::string to_string(NoiseMode mode) {
  switch (mode) {
    case NoiseMode::kNoiseFree: return "noise-free";
    case NoiseMode::kElectricalSnr: return "electrical-snr";
    case NoiseMode::kWeightSnr: return "weight-snr";
    case NoiseMode::kOpticalOsnr: return "optical-osnr";
  }
  return "unknown";
}

NoiseMode noise_mode_from_string(const std::string& name) {
  if (name == "noise-free") return NoiseMode::kNoiseFree;
  if (name == "electrical-snr") return NoiseMode::kElectricalSnr;
  if (name == "weight-snr") return NoiseMode::kWeightSnr;
  if (name == "optical-osnr") return NoiseMode::kOpticalOsnr;
  throw ConfigError("unknown noise mode '" + name +
                    "' (expected noise-free, electrical-snr, weight-snr, "
                    "or optical-osnr)");
}

double sigma_from_snr(double signal_rms, double snr_db) {
  if (!(signal_rms > 0.0))
    throw DomainError("signal_rms must be positive, got " +
                      std::to_string(signal_rms));
  return signal_rms * std::pow(10.0, -snr_db / 20.0);
}

double nonzero_weight_rms(const WeightVector& weights) {
  double sum_sq = 0.0;
  int n = 0;
  double gs = weights.grid_step();
  for (std::int32_t k : weights.ticks) {
    if (k != 0) {
      double w = k * gs;
      sum_sq += w * w;
      ++n;
    }
  }
  if (n == 0) return 0.0;
  return std::sqrt(sum_sq / n);
}

double ase_variance(double osnr_db, int source_lanes) {
  if (source_lanes < 1)
    throw DomainError("source lane count must be >= 1");
  return 0.5 * source_lanes * std::pow(10.0, -osnr_db / 10.0);
}

double Channel::electrical_sigma() const {
  if (!electrical_ref_rms)
    throw ConfigError(
        "electrical-snr mode needs the workload signal RMS; prepare the "
        "channel from a noise-free pass first");
  return sigma_from_snr(*electrical_ref_rms, spec.snr_db);
}

std::vector<double> apply_weight_noise(const WeightVector& weights,
                                       double snr_db, RandomStream& rng) {
  std::vector<double> noisy = weights.values();
  double rms = nonzero_weight_rms(weights);
  if (rms == 0.0) return noisy;  // all-zero operator carries no signal
  double sigma = sigma_from_snr(rms, snr_db);
  for (double& w : noisy) w += sigma * rng.next_gaussian();
  return noisy;
}

void apply_electrical_awgn(MultilevelFrame& frame, double sigma,
                           RandomStream& rng) {
  if (frame.samples.empty()) throw DimensionError("empty multilevel frame");
  for (double& s : frame.samples) s += sigma * rng.next_gaussian();
}

std::vector<double> apply_optical_osnr(std::span<const double> lane_powers,
                                       double osnr_db, int source_lanes,
                                       RandomStream& rng) {
  double var = ase_variance(osnr_db, source_lanes);
  double component_sigma = std::sqrt(var / 2.0);  // per quadrature
  std::vector<double> intensities(lane_powers.size());
  for (std::size_t l = 0; l < lane_powers.size(); ++l) {
    double p = lane_powers[l];
    if (p < 0.0)
      throw DomainError("negative lane power " + std::to_string(p));
    double re = std::sqrt(p) + component_sigma * rng.next_gaussian();
    double im = component_sigma * rng.next_gaussian();
    intensities[l] = re * re + im * im;
  }
  return intensities;
}

std::vector<double> apply_isi(std::span<const double> samples,
                              std::span<const double> taps) {
  if (taps.empty()) throw ConfigError("ISI filter needs at least one tap");
  std::vector<double> out(samples.size(), 0.0);
  for (std::size_t n = 0; n < samples.size(); ++n) {
    double acc = 0.0;
    for (std::size_t t = 0; t < taps.size(); ++t) {
      if (n >= t) acc += taps[t] * samples[n - t];
    }
    out[n] = acc;
  }
  return out;
}

}  // namespace hopsim
