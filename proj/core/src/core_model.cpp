#include "hopsim/core_model.hpp"

#include <cmath>
#include <string>

#include "hopsim/errors.hpp"

namespace hopsim {

namespace {

void check_operator(const WeightVector& weights, int lanes, int split_groups) {
  if (weights.lanes() != lanes)
    throw DimensionError("operator has " + std::to_string(weights.lanes()) +
                         " lanes but " + std::to_string(lanes) +
                         " inputs were given");
  if (split_groups < 1 || lanes % split_groups != 0)
    throw ConfigError("split_groups " + std::to_string(split_groups) +
                      " does not divide the lane count " +
                      std::to_string(lanes));
}

}  // namespace

InnerProductResult hybrid_inner_product(std::span<const BinaryWord> inputs,
                                        const WeightVector& weights,
                                        const Channel& channel,
                                        std::uint64_t word_stream,
                                        int split_groups) {
  BitPlane plane = BitPlane::from_words(inputs);
  check_operator(weights, plane.lanes, split_groups);

  const int slots = plane.slots;
  const int lanes = plane.lanes;
  const double gs = weights.grid_step();

  // Accumulator headroom: |result| <= (2^M - 1) * max(|S_min|, S_max) must
  // fit 63 bits. Overflow is ruled out up front, never wrapped.
  {
    std::uint64_t peak = static_cast<std::uint64_t>(
        std::max(weights.max_level(), -weights.min_level()));
    int level_bits = 0;
    while (peak >> level_bits) ++level_bits;
    if (slots + level_bits > 62)
      throw NumericalError("operator too large: " + std::to_string(slots) +
                           "-bit words with slot levels up to " +
                           std::to_string(peak) +
                           " would overflow the 64-bit accumulator");
  }

  MultilevelFrame frame;
  frame.grid_step = gs;
  frame.min_tick = weights.min_level();
  frame.max_tick = weights.max_level();
  frame.samples.assign(static_cast<std::size_t>(slots), 0.0);

  RandomStream rng = channel.stream_for_word(word_stream);

  std::vector<double> noisy_weights;
  if (channel.spec.mode == NoiseMode::kWeightSnr)
    noisy_weights = apply_weight_noise(weights, channel.spec.snr_db, rng);

  // snr_db describes the workload signal against the accumulated noise of
  // the whole run; split measurements share that budget equally, so their
  // summed noise matches an unsplit run at the same SNR.
  double electrical_sigma = 0.0;
  if (channel.spec.mode == NoiseMode::kElectricalSnr)
    electrical_sigma =
        channel.electrical_sigma() / std::sqrt(static_cast<double>(split_groups));

  double ase_var = 0.0;
  if (channel.spec.mode == NoiseMode::kOpticalOsnr) {
    int source = channel.source_lane_count > 0 ? channel.source_lane_count
                                               : lanes;
    ase_var = ase_variance(channel.spec.osnr_db, source);
  }
  const double ase_component_sigma = std::sqrt(ase_var / 2.0);

  // One detected partial frame per measurement group, summed before decision.
  std::vector<double> partial(static_cast<std::size_t>(slots));
  for (int g = 0; g < split_groups; ++g) {
    std::fill(partial.begin(), partial.end(), 0.0);
    for (int k = 0; k < slots; ++k) {
      double level = 0.0;
      switch (channel.spec.mode) {
        case NoiseMode::kNoiseFree:
        case NoiseMode::kElectricalSnr: {
          std::int64_t ticks = 0;
          for (int l = g; l < lanes; l += split_groups)
            if (plane.at(l, k)) ticks += weights.ticks[l];
          level = static_cast<double>(ticks) * gs;
          break;
        }
        case NoiseMode::kWeightSnr: {
          for (int l = g; l < lanes; l += split_groups)
            if (plane.at(l, k)) level += noisy_weights[l];
          break;
        }
        case NoiseMode::kOpticalOsnr: {
          // Detected intensity per lit lane; the known ASE mean is removed
          // by calibration and the bias-slope sign restores signed weights.
          // Zero-weight lanes have equal on/off transmission and drop out.
          for (int l = g; l < lanes; l += split_groups) {
            std::int32_t tick = weights.ticks[l];
            if (tick == 0) continue;
            double p = plane.at(l, k) ? std::fabs(tick) * gs : 0.0;
            double re = std::sqrt(p) + ase_component_sigma * rng.next_gaussian();
            double im = ase_component_sigma * rng.next_gaussian();
            double intensity = re * re + im * im;
            double signed_contrib = (tick > 0 ? 1.0 : -1.0) *
                                    (intensity - ase_var);
            level += signed_contrib;
          }
          break;
        }
      }
      partial[static_cast<std::size_t>(k)] = level;
    }
    if (channel.spec.mode == NoiseMode::kElectricalSnr) {
      for (int k = 0; k < slots; ++k)
        partial[static_cast<std::size_t>(k)] +=
            electrical_sigma * rng.next_gaussian();
    }
    if (!channel.spec.isi_taps.empty())
      partial = apply_isi(partial, channel.spec.isi_taps);
    for (int k = 0; k < slots; ++k)
      frame.samples[static_cast<std::size_t>(k)] +=
          partial[static_cast<std::size_t>(k)];
  }

  InnerProductResult result;
  result.slot_decisions.resize(static_cast<std::size_t>(slots));
  for (int k = 0; k < slots; ++k)
    result.slot_decisions[static_cast<std::size_t>(k)] =
        decide_slot(frame.samples[static_cast<std::size_t>(k)], gs,
                    frame.min_tick, frame.max_tick);
  result.raw_ticks = shift_add(result.slot_decisions);
  double input_full = static_cast<double>((std::uint64_t{1} << slots) - 1);
  result.normalized = static_cast<double>(result.raw_ticks) /
                      (input_full * static_cast<double>(weights.full_scale()));
  return result;
}

double analog_inner_product(std::span<const double> inputs,
                            const WeightVector& weights,
                            const Channel& channel,
                            std::uint64_t word_stream) {
  if (static_cast<int>(inputs.size()) != weights.lanes())
    throw DimensionError("operator has " + std::to_string(weights.lanes()) +
                         " lanes but " + std::to_string(inputs.size()) +
                         " inputs were given");
  for (double d : inputs)
    if (!(d >= 0.0 && d <= 1.0))
      throw DomainError("analog input " + std::to_string(d) +
                        " outside [0, 1]");

  RandomStream rng = channel.stream_for_word(word_stream);
  const std::vector<double> nominal = weights.values();

  switch (channel.spec.mode) {
    case NoiseMode::kNoiseFree: {
      double acc = 0.0;
      for (std::size_t l = 0; l < inputs.size(); ++l)
        acc += inputs[l] * nominal[l];
      return acc;
    }
    case NoiseMode::kWeightSnr: {
      std::vector<double> noisy =
          apply_weight_noise(weights, channel.spec.snr_db, rng);
      double acc = 0.0;
      for (std::size_t l = 0; l < inputs.size(); ++l)
        acc += inputs[l] * noisy[l];
      return acc;
    }
    case NoiseMode::kElectricalSnr: {
      double acc = 0.0;
      for (std::size_t l = 0; l < inputs.size(); ++l)
        acc += inputs[l] * nominal[l];
      return acc + channel.electrical_sigma() * rng.next_gaussian();
    }
    case NoiseMode::kOpticalOsnr: {
      int source = channel.source_lane_count > 0
                       ? channel.source_lane_count
                       : static_cast<int>(inputs.size());
      double var = ase_variance(channel.spec.osnr_db, source);
      double comp_sigma = std::sqrt(var / 2.0);
      double acc = 0.0;
      for (std::size_t l = 0; l < inputs.size(); ++l) {
        if (weights.ticks[l] == 0) continue;
        double p = inputs[l] * std::fabs(nominal[l]);
        double re = std::sqrt(p) + comp_sigma * rng.next_gaussian();
        double im = comp_sigma * rng.next_gaussian();
        acc += (weights.ticks[l] > 0 ? 1.0 : -1.0) * (re * re + im * im - var);
      }
      return acc;
    }
  }
  throw ConfigError("unhandled noise mode");
}

AcRmsAccumulator::AcRmsAccumulator(int groups)
    : groups_(static_cast<std::size_t>(groups > 0 ? groups : 1)) {}

void AcRmsAccumulator::add(int group, double sample) {
  Group& g = groups_.at(static_cast<std::size_t>(group));
  g.sum += sample;
  g.sum_sq += sample * sample;
  ++g.n;
}

double AcRmsAccumulator::pooled_ac_rms() const {
  double centered = 0.0;
  std::int64_t total = 0;
  for (const Group& g : groups_) {
    if (g.n == 0) continue;
    centered += g.sum_sq - g.sum * g.sum / static_cast<double>(g.n);
    total += g.n;
  }
  if (total == 0) return 0.0;
  return std::sqrt(std::max(0.0, centered) / static_cast<double>(total));
}

std::int64_t AcRmsAccumulator::count() const {
  std::int64_t total = 0;
  for (const Group& g : groups_) total += g.n;
  return total;
}

}  // namespace hopsim
