#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hopsim/channel.hpp"
#include "hopsim/metrics.hpp"
#include "hopsim/model_types.hpp"

namespace hopsim {

struct Image {
  int width = 0;
  int height = 0;
  int depth = 8;    // bits per sample: 8 or 16
  int channels = 1; // 1 (PGM) or 3 (PPM)
  std::vector<std::uint32_t> pixels;  // row-major, channel-interleaved

  std::uint32_t max_value() const { return (1u << depth) - 1; }
  std::uint32_t at(int x, int y, int c = 0) const {
    return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  std::uint32_t& at(int x, int y, int c = 0) {
    return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
};

// Binary Netpbm (P5/P6), maxval 255 or 65535, 16-bit samples big-endian.
Image load_image(const std::string& path);
void save_image(const Image& image, const std::string& path);

struct Kernel {
  std::string name;
  std::array<std::int32_t, 9> ticks{};  // row-major 3x3

  std::int32_t norm() const;       // max |tick|
  std::int64_t amp_ticks() const;  // achievable output amplitude in ticks
  WeightVector weights() const;    // ticks on the smallest covering grid
};

// Registry of the standard 3x3 operators (prewitt_v, prewitt_h, prewitt_p45,
// prewitt_m45, sobel_v, laplace_d4, sharpen_d4, identity). Unknown names
// raise ConfigError listing the registry.
const Kernel& kernel(const std::string& name);
std::vector<std::string> kernel_names();

// Valid 3x3 patches of one channel, row-major over output pixels; patch lane
// order is row-major over the window, matching the 1x9 operator reshape.
std::vector<std::array<std::uint32_t, 9>> extract_patches(const Image& image,
                                                          int channel = 0);

// Exact integer convolution sum_l D_l * tick_l, no normalization or clipping.
std::vector<std::int64_t> convolve_oracle(const Image& image,
                                          const Kernel& kernel,
                                          int channel = 0);

// Sub-operators of a split measurement: group g keeps lanes with
// lane % groups == g (kernel columns) and zeroes the rest. Their oracle maps
// sum to the full kernel's map.
std::vector<Kernel> split_measurements(const Kernel& kernel, int groups);

enum class Scheme { kHybrid, kAnalog };
std::string to_string(Scheme scheme);
Scheme scheme_from_string(const std::string& name);

struct ConvolveOptions {
  Scheme scheme = Scheme::kHybrid;
  ChannelSpec channel;
  int split_groups = 1;
  int histogram_bins = 101;
  // Worker threads over the patch map. Each word owns an RNG stream, so the
  // output is identical for any thread count.
  int threads = 1;
};

struct ConvolveOutput {
  int out_width = 0;
  int out_height = 0;
  std::vector<std::int64_t> oracle;      // exact integer map
  std::vector<std::int64_t> hybrid_map;  // hybrid scheme: decided integers
  std::vector<double> analog_map;        // analog scheme: continuous outputs
  std::vector<double> errors;            // normalized (sim - oracle)
  ErrorReport report;                    // per is meaningful for hybrid only
  double normalizer = 1.0;    // (2^depth - 1) * amp_ticks, maps raw to [-1,1]
  double electrical_ref_rms = 0.0;  // resolved AC-RMS (electrical mode)
};

// Runs the selected scheme over every patch of one channel. Inputs are
// normalized by 1/(2^depth - 1); reported errors additionally divide by the
// kernel's achievable amplitude so every output lies in [-1, 1]. Word RNG
// streams are indexed by output pixel (plus a caller-chosen offset, used for
// RGB planes), so results are independent of evaluation order.
ConvolveOutput convolve_sim(const Image& image, const Kernel& kernel,
                            const ConvolveOptions& options, int channel = 0,
                            std::uint64_t stream_offset = 0);

// Deterministic test image: diagonal gradient plus seeded uniform noise.
// For depth 16 the content occupies the low 12 bits (LSB-aligned sensor
// data in a 16-bit container), keeping every active bit plane noise-dithered.
Image make_test_image(int width, int height, int depth, std::uint64_t seed,
                      int channels = 1);

// Affine PGM export of a signed map: stored = (raw - offset) / scale,
// rounded half away from zero. Returned pair is (offset, scale).
std::pair<std::int64_t, std::int64_t> signed_map_to_image(
    std::span<const std::int64_t> map, int width, int height,
    std::int64_t raw_min, std::int64_t raw_max, Image& out);

}  // namespace hopsim
