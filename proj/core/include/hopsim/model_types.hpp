#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace hopsim {

// An M-bit unsigned input word. M up to 32; the processor's arithmetic is
// sized so that shift-add accumulation can never overflow for any supported
// (M, N, L) combination.
struct BinaryWord {
  std::uint32_t value = 0;
  int bit_width = 8;
};

BinaryWord make_word(std::uint64_t value, int bit_width);

// MSB-first bit expansion; throws DomainError when value >= 2^bit_width.
std::vector<std::uint8_t> encode_word(std::uint64_t value, int bit_width);

// Signed weights on the 1/(2^N - 1) grid, stored as integer ticks.
struct WeightVector {
  std::vector<std::int32_t> ticks;
  int resolution = 1;  // N

  int lanes() const { return static_cast<int>(ticks.size()); }
  std::int64_t full_scale() const { return (std::int64_t{1} << resolution) - 1; }
  double grid_step() const { return 1.0 / static_cast<double>(full_scale()); }

  // Decision bounds of the slot grid: sums of the negative / positive ticks.
  std::int64_t min_level() const;
  std::int64_t max_level() const;

  // Real weight values tick/(2^N - 1), each in [-1, 1].
  std::vector<double> values() const;
};

// round(w * (2^N - 1)), half away from zero; |w| > 1 is a DomainError.
std::int32_t quantize_weight(double w, int resolution);
WeightVector quantize_weights(std::span<const double> weights, int resolution);

// Builds a WeightVector directly from integer ticks, choosing the smallest
// resolution whose full scale covers max|tick|. Keeps integer-valued
// operators (convolution kernels) exactly representable.
WeightVector weights_from_ticks(std::span<const std::int32_t> ticks);

// L x M bit matrix, column 0 = MSB slot.
struct BitPlane {
  int lanes = 0;
  int slots = 0;
  std::vector<std::uint8_t> bits;  // row-major, lanes x slots

  static BitPlane from_words(std::span<const BinaryWord> words);
  std::uint8_t at(int lane, int slot) const { return bits[lane * slots + slot]; }
};

// Detected multilevel (PAM) samples of one output word, slot 0 = MSB.
// Samples are in normalized units: the ideal value of a slot is
// (integer level) * grid_step.
struct MultilevelFrame {
  std::vector<double> samples;
  double grid_step = 1.0;
  std::int64_t min_tick = 0;
  std::int64_t max_tick = 0;
};

// Exact integer weighted sum of one slot, in tick units.
std::int64_t ideal_slot_ticks(std::span<const std::uint8_t> bits,
                              const WeightVector& weights);

// Same, scaled to normalized units (ticks * grid_step).
double ideal_slot_level(std::span<const std::uint8_t> bits,
                        const WeightVector& weights);

// Nearest grid level, half away from zero, clamped to [min_tick, max_tick].
// Non-finite samples raise NumericalError (corrupted signal).
std::int64_t decide_slot(double sample, double grid_step, std::int64_t min_tick,
                         std::int64_t max_tick);

// Binary-word recovery: sum of slot_ticks[k] * 2^(M-1-k). Exact in 64-bit;
// the supported parameter space (M<=32, N<=16, L<=2^14) cannot overflow.
std::int64_t shift_add(std::span<const std::int64_t> slot_ticks);

struct InnerProductResult {
  std::int64_t raw_ticks = 0;  // units of 1/((2^M-1)(2^N-1)) before scaling
  double normalized = 0.0;     // raw_ticks / ((2^M-1)(2^N-1))
  std::vector<std::int64_t> slot_decisions;
};

}  // namespace hopsim
