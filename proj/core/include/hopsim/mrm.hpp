#pragma once

namespace hopsim {

// All-pass microring intensity transmission (Lorentzian notch) driving the
// weight lookup. The high-speed input shifts the resonance by one modulation
// excursion; the heater bias sets the standing detuning. The weight is the
// calibrated on/off transmission difference:
//
//   T(x)      = 1 - depth / (1 + (2x / fwhm)^2)
//   weight(d) = (T(d - mod_shift) - T(d)) / calibration_scale
//
// with d the bias detuning of the laser from the unmodulated resonance.
// weight(d) is strictly decreasing between its two extrema; the positive
// slope sits blue of the symmetry point mod_shift/2 and the negative slope
// red of it, so the weight sign flips with the bias side. The calibration
// scale is chosen so the achievable range slightly exceeds [-1, 1].
struct MrmParams {
  double fwhm = 1.0;            // resonance linewidth (detuning unit)
  double extinction_db = 13.0;  // notch depth, 10*log10(1/T_min)
  double mod_shift = 1.0;       // resonance shift of a logic-1 drive
  double range_margin = 1.05;   // achievable |weight| at the extrema
};

class MrmModel {
 public:
  explicit MrmModel(MrmParams params = {});

  // Raw notch transmission at a given detuning.
  double transmission(double detuning) const;

  // Calibrated weight; detunings outside the monotone tuning range raise
  // RangeError.
  double weight_for_bias(double detuning) const;

  // Monotone numerical inversion (bisection to 1e-9 in detuning). Weights
  // outside the achievable range raise RangeError reporting [w_min, w_max].
  double bias_for_weight(double weight) const;

  double min_bias() const { return bias_lo_; }
  double max_bias() const { return bias_hi_; }
  double min_weight() const { return weight_lo_; }
  double max_weight() const { return weight_hi_; }
  double symmetry_point() const { return params_.mod_shift / 2.0; }

 private:
  double raw_difference(double detuning) const;

  MrmParams params_;
  double depth_ = 0.0;
  double scale_ = 1.0;
  double bias_lo_ = 0.0, bias_hi_ = 0.0;      // tuning range (extrema)
  double weight_lo_ = 0.0, weight_hi_ = 0.0;  // achievable weights
};

}  // namespace hopsim
