#include "hopsim/mrm.hpp"

#include <cmath>
#include <string>

#include "hopsim/errors.hpp"

namespace hopsim {

namespace {

// Golden-section search for the maximizer of f on [a, b].
template <typename F>
double maximize(F f, double a, double b) {
  constexpr double kInvPhi = 0.6180339887498949;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  for (int it = 0; it < 200; ++it) {
    if (f(c) < f(d)) a = c; else b = d;
    c = b - kInvPhi * (b - a);
    d = a + kInvPhi * (b - a);
  }
  return 0.5 * (a + b);
}

}  // namespace

MrmModel::MrmModel(MrmParams params) : params_(params) {
  if (!(params_.fwhm > 0.0) || !(params_.mod_shift > 0.0))
    throw ConfigError("MRM linewidth and modulation shift must be positive");
  if (!(params_.extinction_db > 0.0))
    throw ConfigError("MRM extinction must be positive dB");
  depth_ = 1.0 - std::pow(10.0, -params_.extinction_db / 10.0);

  // The raw on/off difference peaks once on each side of the symmetry point;
  // between the two extrema it is strictly monotone. Search a generous span.
  double span = 4.0 * (params_.fwhm + params_.mod_shift);
  double mid = symmetry_point();
  bias_lo_ = maximize([this](double x) { return raw_difference(x); },
                      mid - span, mid);
  bias_hi_ = maximize([this](double x) { return -raw_difference(x); }, mid,
                      mid + span);

  double peak = raw_difference(bias_lo_);
  scale_ = peak / params_.range_margin;
  weight_hi_ = raw_difference(bias_lo_) / scale_;
  weight_lo_ = raw_difference(bias_hi_) / scale_;
}

double MrmModel::transmission(double detuning) const {
  double x = 2.0 * detuning / params_.fwhm;
  return 1.0 - depth_ / (1.0 + x * x);
}

double MrmModel::raw_difference(double detuning) const {
  return transmission(detuning - params_.mod_shift) - transmission(detuning);
}

double MrmModel::weight_for_bias(double detuning) const {
  if (detuning < bias_lo_ || detuning > bias_hi_)
    throw RangeError("bias detuning " + std::to_string(detuning) +
                     " outside the tuning range [" + std::to_string(bias_lo_) +
                     ", " + std::to_string(bias_hi_) + "]");
  return raw_difference(detuning) / scale_;
}

double MrmModel::bias_for_weight(double weight) const {
  if (weight > weight_hi_ || weight < weight_lo_)
    throw RangeError("weight " + std::to_string(weight) +
                     " outside the achievable range [" +
                     std::to_string(weight_lo_) + ", " +
                     std::to_string(weight_hi_) + "]");
  // weight_for_bias is strictly decreasing on [bias_lo_, bias_hi_].
  double lo = bias_lo_, hi = bias_hi_;
  while (hi - lo > 1e-9) {
    double mid = 0.5 * (lo + hi);
    if (weight_for_bias(mid) > weight) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace hopsim
