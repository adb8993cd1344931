#include "hopsim/model_types.hpp"

#include <cmath>
#include <string>

#include "hopsim/errors.hpp"

namespace hopsim {

namespace {

void check_bit_width(int bit_width) {
  if (bit_width < 1 || bit_width > 32)
    throw DomainError("bit_width must be in [1, 32], got " +
                      std::to_string(bit_width));
}

}  // namespace

BinaryWord make_word(std::uint64_t value, int bit_width) {
  check_bit_width(bit_width);
  std::uint64_t limit = std::uint64_t{1} << bit_width;
  if (value >= limit)
    throw DomainError("value " + std::to_string(value) + " does not fit in " +
                      std::to_string(bit_width) + " bits");
  return BinaryWord{static_cast<std::uint32_t>(value), bit_width};
}

std::vector<std::uint8_t> encode_word(std::uint64_t value, int bit_width) {
  BinaryWord w = make_word(value, bit_width);
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(bit_width));
  for (int k = 0; k < bit_width; ++k)
    bits[k] = static_cast<std::uint8_t>((w.value >> (bit_width - 1 - k)) & 1u);
  return bits;
}

std::int64_t WeightVector::min_level() const {
  std::int64_t s = 0;
  for (std::int32_t k : ticks)
    if (k < 0) s += k;
  return s;
}

std::int64_t WeightVector::max_level() const {
  std::int64_t s = 0;
  for (std::int32_t k : ticks)
    if (k > 0) s += k;
  return s;
}

std::vector<double> WeightVector::values() const {
  std::vector<double> v(ticks.size());
  double gs = grid_step();
  for (std::size_t i = 0; i < ticks.size(); ++i) v[i] = ticks[i] * gs;
  return v;
}

std::int32_t quantize_weight(double w, int resolution) {
  if (resolution < 1 || resolution > 16)
    throw DomainError("weight resolution must be in [1, 16], got " +
                      std::to_string(resolution));
  if (!(std::fabs(w) <= 1.0))
    throw DomainError("weight " + std::to_string(w) +
                      " outside [-1, 1]; pre-normalize weights");
  double full = static_cast<double>((std::int64_t{1} << resolution) - 1);
  double scaled = w * full;
  // Half away from zero.
  double k = scaled >= 0.0 ? std::floor(scaled + 0.5) : std::ceil(scaled - 0.5);
  return static_cast<std::int32_t>(k);
}

WeightVector quantize_weights(std::span<const double> weights, int resolution) {
  WeightVector wv;
  wv.resolution = resolution;
  wv.ticks.reserve(weights.size());
  for (double w : weights) wv.ticks.push_back(quantize_weight(w, resolution));
  return wv;
}

WeightVector weights_from_ticks(std::span<const std::int32_t> ticks) {
  std::int64_t peak = 0;
  for (std::int32_t k : ticks) peak = std::max<std::int64_t>(peak, std::llabs(k));
  int resolution = 1;
  while (((std::int64_t{1} << resolution) - 1) < peak) ++resolution;
  WeightVector wv;
  wv.resolution = resolution;
  wv.ticks.assign(ticks.begin(), ticks.end());
  return wv;
}

BitPlane BitPlane::from_words(std::span<const BinaryWord> words) {
  BitPlane plane;
  if (words.empty()) throw DimensionError("bit plane needs at least one lane");
  plane.lanes = static_cast<int>(words.size());
  plane.slots = words[0].bit_width;
  check_bit_width(plane.slots);
  for (const BinaryWord& w : words)
    if (w.bit_width != plane.slots)
      throw DimensionError("mixed input bit widths: " +
                           std::to_string(w.bit_width) + " vs " +
                           std::to_string(plane.slots));
  plane.bits.resize(static_cast<std::size_t>(plane.lanes) * plane.slots);
  for (int l = 0; l < plane.lanes; ++l)
    for (int k = 0; k < plane.slots; ++k)
      plane.bits[static_cast<std::size_t>(l) * plane.slots + k] =
          static_cast<std::uint8_t>(
              (words[l].value >> (plane.slots - 1 - k)) & 1u);
  return plane;
}

std::int64_t ideal_slot_ticks(std::span<const std::uint8_t> bits,
                              const WeightVector& weights) {
  if (bits.size() != weights.ticks.size())
    throw DimensionError("slot has " + std::to_string(bits.size()) +
                         " bits but weight vector has " +
                         std::to_string(weights.ticks.size()) + " lanes");
  std::int64_t level = 0;
  for (std::size_t l = 0; l < bits.size(); ++l)
    if (bits[l]) level += weights.ticks[l];
  return level;
}

double ideal_slot_level(std::span<const std::uint8_t> bits,
                        const WeightVector& weights) {
  return static_cast<double>(ideal_slot_ticks(bits, weights)) *
         weights.grid_step();
}

std::int64_t decide_slot(double sample, double grid_step, std::int64_t min_tick,
                         std::int64_t max_tick) {
  if (!(grid_step > 0.0)) throw DomainError("grid_step must be positive");
  if (min_tick > max_tick)
    throw DomainError("decision bounds inverted: [" + std::to_string(min_tick) +
                      ", " + std::to_string(max_tick) + "]");
  if (!std::isfinite(sample))
    throw NumericalError("non-finite sample reached the decision stage");
  double scaled = sample / grid_step;
  double k =
      scaled >= 0.0 ? std::floor(scaled + 0.5) : std::ceil(scaled - 0.5);
  auto tick = static_cast<std::int64_t>(k);
  if (tick < min_tick) tick = min_tick;
  if (tick > max_tick) tick = max_tick;
  return tick;
}

std::int64_t shift_add(std::span<const std::int64_t> slot_ticks) {
  std::int64_t acc = 0;
  for (std::int64_t tick : slot_ticks) {
    acc = acc * 2 + tick;
  }
  return acc;
}

}  // namespace hopsim
