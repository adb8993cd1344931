#include "commands.hpp"
#include "hopsim/errors.hpp"

namespace hoptool {

void ChannelFlags::attach(CLI::App* cmd) {
  snr_opt = cmd->add_option("--snr", snr_db,
                            "channel SNR in dB (electrical-snr unless "
                            "--noise-mode says otherwise)");
  osnr_opt = cmd->add_option("--osnr", osnr_db,
                             "light-source OSNR in dB (12.5 GHz reference "
                             "bandwidth)");
  cmd->add_flag("--noise-free", noise_free, "disable all noise (default)");
  cmd->add_option("--noise-mode", noise_mode,
                  "noise-free|electrical-snr|weight-snr|optical-osnr");
  cmd->add_option("--isi", isi_taps, "FIR ISI taps applied per measurement")
      ->delimiter(',');
  cmd->add_option("--seed", seed, "64-bit RNG seed")->capture_default_str();
  snr_opt->excludes(osnr_opt);
  osnr_opt->excludes(snr_opt);
}

hopsim::ChannelSpec ChannelFlags::resolve() const {
  const bool snr_given = snr_opt && snr_opt->count() > 0;
  const bool osnr_given = osnr_opt && osnr_opt->count() > 0;

  hopsim::ChannelSpec spec;
  spec.seed = seed;
  spec.isi_taps = isi_taps;
  spec.snr_db = snr_db;
  spec.osnr_db = osnr_db;

  if (!noise_mode.empty())
    spec.mode = hopsim::noise_mode_from_string(noise_mode);
  else if (osnr_given)
    spec.mode = hopsim::NoiseMode::kOpticalOsnr;
  else if (snr_given)
    spec.mode = hopsim::NoiseMode::kElectricalSnr;
  else
    spec.mode = hopsim::NoiseMode::kNoiseFree;

  if (noise_free && spec.mode != hopsim::NoiseMode::kNoiseFree)
    throw hopsim::ConfigError("--noise-free conflicts with --snr/--osnr");
  switch (spec.mode) {
    case hopsim::NoiseMode::kElectricalSnr:
    case hopsim::NoiseMode::kWeightSnr:
      if (!snr_given)
        throw hopsim::ConfigError("noise mode " + hopsim::to_string(spec.mode) +
                                  " needs --snr");
      break;
    case hopsim::NoiseMode::kOpticalOsnr:
      if (!osnr_given)
        throw hopsim::ConfigError("optical-osnr mode needs --osnr");
      break;
    case hopsim::NoiseMode::kNoiseFree:
      if (snr_given || osnr_given)
        throw hopsim::ConfigError(
            "--noise-mode noise-free conflicts with --snr/--osnr");
      break;
  }
  return spec;
}

}  // namespace hoptool
