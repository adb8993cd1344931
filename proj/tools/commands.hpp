#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hopsim/channel.hpp"

namespace hoptool {

// Shared channel flags. --snr selects electrical-snr unless --noise-mode
// overrides it; --osnr selects optical-osnr; the default is noise-free.
struct ChannelFlags {
  double snr_db = 0.0;
  double osnr_db = 0.0;
  bool noise_free = false;
  std::string noise_mode;
  std::vector<double> isi_taps;
  std::uint64_t seed = 0;

  CLI::Option* snr_opt = nullptr;
  CLI::Option* osnr_opt = nullptr;

  void attach(CLI::App* cmd);
  hopsim::ChannelSpec resolve() const;
};

void register_convolve(CLI::App& app);
void register_sweep(CLI::App& app);
void register_design_space(CLI::App& app);
void register_mnist(CLI::App& app);
void register_eq_demo(CLI::App& app);
void register_gen_image(CLI::App& app);

}  // namespace hoptool
