#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hopsim/channel.hpp"
#include "hopsim/model_types.hpp"

namespace hopsim {

// One hybrid inner product: slice the binary words, form the per-slot
// weighted sums, pass every measurement through the channel, sum partial
// frames, decide each slot on the nominal grid, and recover the word by
// shift-add. With a noise-free channel the result is exactly
// sum_l D_l * k_l in raw ticks.
//
// split_groups > 1 partitions the lanes into measurement groups (lane index
// mod split_groups); the noisy partial frames are summed before the decision
// stage. Electrical and ASE noise accumulate across measurements; weight
// perturbations are drawn once per word per lane regardless of the split.
InnerProductResult hybrid_inner_product(std::span<const BinaryWord> inputs,
                                        const WeightVector& weights,
                                        const Channel& channel,
                                        std::uint64_t word_stream = 0,
                                        int split_groups = 1);

// Analog reference scheme: sum_l d_l * (w_l + n_l) with inputs in [0, 1].
// No decision stage; the output stays continuous. Weight noise is redrawn
// per evaluation; electrical noise is a single additive term on the output;
// ASE noise uses the same per-lane intensity model as the hybrid path.
double analog_inner_product(std::span<const double> inputs,
                            const WeightVector& weights,
                            const Channel& channel,
                            std::uint64_t word_stream = 0);

// Pooled AC-coupled RMS accumulator. Electrical SNR is referenced to the
// ideal multilevel signal with each measurement group's own DC removed
// (receivers are AC-coupled; baseline offsets are calibration constants).
class AcRmsAccumulator {
 public:
  explicit AcRmsAccumulator(int groups = 1);
  void add(int group, double sample);
  double pooled_ac_rms() const;
  std::int64_t count() const;

 private:
  struct Group {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::int64_t n = 0;
  };
  std::vector<Group> groups_;
};

}  // namespace hopsim
