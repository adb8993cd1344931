#include "hopsim/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <thread>

#include "hopsim/core_model.hpp"
#include "hopsim/errors.hpp"

namespace hopsim {

namespace {

// ---- Netpbm parsing -------------------------------------------------------

struct Reader {
  std::vector<char> data;
  std::size_t pos = 0;
  std::string path;

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(path + ": " + what, static_cast<long long>(pos));
  }
  bool eof() const { return pos >= data.size(); }
  char peek() const { return data[pos]; }

  void skip_space_and_comments() {
    while (!eof()) {
      char c = peek();
      if (c == '#') {
        while (!eof() && peek() != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
      } else {
        break;
      }
    }
  }

  std::uint64_t read_uint(const char* field) {
    skip_space_and_comments();
    if (eof() || !std::isdigit(static_cast<unsigned char>(peek())))
      fail(std::string("expected ") + field);
    std::uint64_t v = 0;
    while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
      v = v * 10 + static_cast<std::uint64_t>(peek() - '0');
      if (v > 0xFFFFFFFFull) fail(std::string(field) + " out of range");
      ++pos;
    }
    return v;
  }
};

// ---- kernel registry ------------------------------------------------------

const std::map<std::string, std::array<std::int32_t, 9>>& registry() {
  static const std::map<std::string, std::array<std::int32_t, 9>> k = {
      {"prewitt_v",   {-1, 0, 1, -1, 0, 1, -1, 0, 1}},
      {"prewitt_h",   {-1, -1, -1, 0, 0, 0, 1, 1, 1}},
      {"prewitt_p45", {0, 1, 1, -1, 0, 1, -1, -1, 0}},
      {"prewitt_m45", {1, 1, 0, 1, 0, -1, 0, -1, -1}},
      {"sobel_v",     {-1, 0, 1, -2, 0, 2, -1, 0, 1}},
      {"laplace_d4",  {0, 1, 0, 1, -4, 1, 0, 1, 0}},
      {"sharpen_d4",  {0, -1, 0, -1, 5, -1, 0, -1, 0}},
      {"identity",    {0, 0, 0, 0, 1, 0, 0, 0, 0}},
  };
  return k;
}

void check_depth(int depth) {
  if (depth != 8 && depth != 16)
    throw DomainError("sample depth must be 8 or 16 bits, got " +
                      std::to_string(depth));
}

}  // namespace

Image load_image(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open image file: " + path);
  Reader r;
  r.path = path;
  r.data.assign(std::istreambuf_iterator<char>(in),
                std::istreambuf_iterator<char>());

  if (r.data.size() < 2) r.fail("file too short for a Netpbm header");
  char m0 = r.data[0], m1 = r.data[1];
  if (m0 != 'P' || (m1 != '5' && m1 != '6'))
    r.fail("unsupported magic (binary P5/P6 expected)");
  r.pos = 2;

  Image img;
  img.channels = (m1 == '6') ? 3 : 1;
  std::uint64_t width = r.read_uint("width");
  std::uint64_t height = r.read_uint("height");
  std::uint64_t maxval = r.read_uint("maxval");
  if (width < 1 || height < 1 || width > 1000000 || height > 1000000)
    r.fail("unreasonable image dimensions " + std::to_string(width) + "x" +
           std::to_string(height));
  img.width = static_cast<int>(width);
  img.height = static_cast<int>(height);
  if (maxval == 255) img.depth = 8;
  else if (maxval == 65535) img.depth = 16;
  else r.fail("unsupported maxval " + std::to_string(maxval) +
              " (255 or 65535)");
  if (r.eof() || !std::isspace(static_cast<unsigned char>(r.peek())))
    r.fail("missing whitespace before pixel payload");
  ++r.pos;

  std::size_t samples = static_cast<std::size_t>(img.width) * img.height *
                        img.channels;
  std::size_t bytes_per = img.depth == 16 ? 2 : 1;
  if (r.data.size() - r.pos < samples * bytes_per)
    r.fail("truncated payload: need " + std::to_string(samples * bytes_per) +
           " bytes, have " + std::to_string(r.data.size() - r.pos));

  img.pixels.resize(samples);
  const unsigned char* p =
      reinterpret_cast<const unsigned char*>(r.data.data()) + r.pos;
  if (img.depth == 8) {
    for (std::size_t i = 0; i < samples; ++i) img.pixels[i] = p[i];
  } else {
    for (std::size_t i = 0; i < samples; ++i)
      img.pixels[i] = (static_cast<std::uint32_t>(p[2 * i]) << 8) | p[2 * i + 1];
  }
  return img;
}

void save_image(const Image& image, const std::string& path) {
  check_depth(image.depth);
  if (image.channels != 1 && image.channels != 3)
    throw DomainError("images have 1 or 3 channels");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write image file: " + path);
  out << (image.channels == 3 ? "P6" : "P5") << '\n'
      << image.width << ' ' << image.height << '\n'
      << image.max_value() << '\n';
  if (image.depth == 8) {
    for (std::uint32_t v : image.pixels)
      out.put(static_cast<char>(v & 0xFF));
  } else {
    for (std::uint32_t v : image.pixels) {
      out.put(static_cast<char>((v >> 8) & 0xFF));
      out.put(static_cast<char>(v & 0xFF));
    }
  }
  if (!out) throw IoError("short write to " + path);
}

std::int32_t Kernel::norm() const {
  std::int32_t peak = 0;
  for (std::int32_t t : ticks) peak = std::max(peak, std::abs(t));
  return peak;
}

std::int64_t Kernel::amp_ticks() const {
  std::int64_t pos = 0, neg = 0;
  for (std::int32_t t : ticks) {
    if (t > 0) pos += t;
    else neg -= t;
  }
  return std::max(pos, neg);
}

WeightVector Kernel::weights() const {
  return weights_from_ticks(ticks);
}

const Kernel& kernel(const std::string& name) {
  static std::map<std::string, Kernel> cache;
  auto hit = cache.find(name);
  if (hit != cache.end()) return hit->second;
  auto it = registry().find(name);
  if (it == registry().end()) {
    std::string names;
    for (const auto& [n, _] : registry()) {
      if (!names.empty()) names += ", ";
      names += n;
    }
    throw ConfigError("unknown kernel '" + name + "' (registry: " + names +
                      ")");
  }
  Kernel k;
  k.name = name;
  k.ticks = it->second;
  return cache.emplace(name, k).first->second;
}

std::vector<std::string> kernel_names() {
  std::vector<std::string> names;
  for (const auto& [n, _] : registry()) names.push_back(n);
  return names;
}

std::vector<std::array<std::uint32_t, 9>> extract_patches(const Image& image,
                                                          int channel) {
  if (image.width < 3 || image.height < 3)
    throw DimensionError("image must be at least 3x3 for patch extraction, "
                         "got " + std::to_string(image.width) + "x" +
                         std::to_string(image.height));
  if (channel < 0 || channel >= image.channels)
    throw DimensionError("channel index out of range");
  std::vector<std::array<std::uint32_t, 9>> patches;
  patches.reserve(static_cast<std::size_t>(image.height - 2) *
                  (image.width - 2));
  for (int y = 0; y + 2 < image.height; ++y) {
    for (int x = 0; x + 2 < image.width; ++x) {
      std::array<std::uint32_t, 9> patch;
      int i = 0;
      for (int dy = 0; dy < 3; ++dy)
        for (int dx = 0; dx < 3; ++dx)
          patch[i++] = image.at(x + dx, y + dy, channel);
      patches.push_back(patch);
    }
  }
  return patches;
}

std::vector<std::int64_t> convolve_oracle(const Image& image,
                                          const Kernel& kernel, int channel) {
  auto patches = extract_patches(image, channel);
  std::vector<std::int64_t> out(patches.size());
  for (std::size_t i = 0; i < patches.size(); ++i) {
    std::int64_t acc = 0;
    for (int l = 0; l < 9; ++l)
      acc += static_cast<std::int64_t>(patches[i][l]) * kernel.ticks[l];
    out[i] = acc;
  }
  return out;
}

std::vector<Kernel> split_measurements(const Kernel& kernel, int groups) {
  if (groups < 1 || 9 % groups != 0)
    throw ConfigError("split group count must divide 9, got " +
                      std::to_string(groups));
  std::vector<Kernel> subs;
  for (int g = 0; g < groups; ++g) {
    Kernel sub = kernel;
    sub.name = kernel.name + "/group" + std::to_string(g);
    for (int l = 0; l < 9; ++l)
      if (l % groups != g) sub.ticks[l] = 0;
    subs.push_back(sub);
  }
  return subs;
}

std::string to_string(Scheme scheme) {
  return scheme == Scheme::kHybrid ? "hybrid" : "analog";
}

Scheme scheme_from_string(const std::string& name) {
  if (name == "hybrid") return Scheme::kHybrid;
  if (name == "analog") return Scheme::kAnalog;
  throw ConfigError("unknown scheme '" + name + "' (hybrid or analog)");
}

ConvolveOutput convolve_sim(const Image& image, const Kernel& kernel,
                            const ConvolveOptions& options, int channel,
                            std::uint64_t stream_offset) {
  check_depth(image.depth);
  if (kernel.amp_ticks() == 0)
    throw ConfigError("kernel '" + kernel.name + "' is all zero");
  auto patches = extract_patches(image, channel);
  const WeightVector weights = kernel.weights();
  const int depth = image.depth;
  const double input_full = static_cast<double>(image.max_value());

  ConvolveOutput out;
  out.out_width = image.width - 2;
  out.out_height = image.height - 2;
  out.oracle = convolve_oracle(image, kernel, channel);
  out.normalizer = input_full * static_cast<double>(kernel.amp_ticks());

  Channel chan;
  chan.spec = options.channel;
  chan.source_lane_count = 9;

  // Electrical SNR is referenced once per run to the AC-coupled RMS of the
  // full ideal multilevel signal of this workload (baseline offsets are
  // calibration constants). The split count does not change the reference.
  if (options.channel.mode == NoiseMode::kElectricalSnr) {
    AcRmsAccumulator acc(1);
    if (options.scheme == Scheme::kHybrid) {
      const double gs = weights.grid_step();
      for (const auto& patch : patches) {
        for (int k = depth - 1; k >= 0; --k) {
          std::int64_t level = 0;
          for (int l = 0; l < 9; ++l)
            if ((patch[l] >> k) & 1u) level += weights.ticks[l];
          acc.add(0, static_cast<double>(level) * gs);
        }
      }
    } else {
      const std::vector<double> w = weights.values();
      for (const auto& patch : patches) {
        double y = 0.0;
        for (int l = 0; l < 9; ++l) y += patch[l] / input_full * w[l];
        acc.add(0, y);
      }
    }
    out.electrical_ref_rms = acc.pooled_ac_rms();
    if (!(out.electrical_ref_rms > 0.0))
      throw DomainError("workload carries no AC signal; electrical SNR is "
                        "undefined");
    chan.electrical_ref_rms = out.electrical_ref_rms;
  }

  const std::size_t n = patches.size();
  out.errors.resize(n);
  if (options.scheme == Scheme::kHybrid) out.hybrid_map.resize(n);
  else out.analog_map.resize(n);

  auto process_range = [&](std::size_t begin, std::size_t end) {
    std::vector<BinaryWord> word(9);
    std::vector<double> d(9);
    const double amp = static_cast<double>(kernel.amp_ticks()) /
                       static_cast<double>(weights.full_scale());
    for (std::size_t i = begin; i < end; ++i) {
      if (options.scheme == Scheme::kHybrid) {
        for (int l = 0; l < 9; ++l)
          word[static_cast<std::size_t>(l)] =
              BinaryWord{patches[i][l], depth};
        InnerProductResult r = hybrid_inner_product(
            word, weights, chan, stream_offset + i, options.split_groups);
        out.hybrid_map[i] = r.raw_ticks;
        out.errors[i] =
            static_cast<double>(r.raw_ticks - out.oracle[i]) / out.normalizer;
      } else {
        for (int l = 0; l < 9; ++l)
          d[static_cast<std::size_t>(l)] = patches[i][l] / input_full;
        double y = analog_inner_product(d, weights, chan, stream_offset + i);
        out.analog_map[i] = y;
        double oracle_norm =
            static_cast<double>(out.oracle[i]) / out.normalizer;
        out.errors[i] = y / amp - oracle_norm;
      }
    }
  };

  int threads = std::clamp<int>(options.threads, 1,
                                static_cast<int>(std::max<std::size_t>(n, 1)));
  if (threads == 1) {
    process_range(0, n);
  } else {
    // Disjoint ranges into preallocated slots; word streams make the result
    // identical to the serial pass.
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors_seen(
        static_cast<std::size_t>(threads));
    std::size_t chunk = (n + static_cast<std::size_t>(threads) - 1) /
                        static_cast<std::size_t>(threads);
    for (int t = 0; t < threads; ++t) {
      std::size_t begin = static_cast<std::size_t>(t) * chunk;
      std::size_t end = std::min(n, begin + chunk);
      pool.emplace_back([&, t, begin, end] {
        try {
          process_range(begin, end);
        } catch (...) {
          errors_seen[static_cast<std::size_t>(t)] = std::current_exception();
        }
      });
    }
    for (std::thread& th : pool) th.join();
    for (const std::exception_ptr& e : errors_seen)
      if (e) std::rethrow_exception(e);
  }
  if (options.scheme == Scheme::kHybrid)
    out.report.per = pixel_error_rate(out.oracle, out.hybrid_map);

  std::vector<double> zeros(n, 0.0);
  out.report.rmse = rmse(zeros, out.errors);
  out.report.n = static_cast<std::int64_t>(n);
  out.report.histogram = noise_histogram(out.errors, options.histogram_bins);
  out.report.sigma = out.report.histogram.fitted_sigma;
  out.report.precision_bits =
      out.report.sigma > 0.0 ? precision_bits(out.report.sigma) : 0.0;
  return out;
}

Image make_test_image(int width, int height, int depth, std::uint64_t seed,
                      int channels) {
  check_depth(depth);
  if (width < 1 || height < 1)
    throw DomainError("test image dimensions must be positive");
  Image img;
  img.width = width;
  img.height = height;
  img.depth = depth;
  img.channels = channels;
  img.pixels.resize(static_cast<std::size_t>(width) * height * channels);

  // Active content range: full scale at 8 bits, the low 12 bits at 16 bits
  // (LSB-aligned sensor data). Noise dominates the gradient so every active
  // bit plane stays dithered.
  const std::uint32_t noise_span = depth == 8 ? 192 : 3072;
  const std::uint32_t grad_span = depth == 8 ? 64 : 1024;

  RandomStream rng(seed, 0);
  std::size_t i = 0;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double t = static_cast<double>(x + y) /
                 static_cast<double>(width + height - 2);
      auto grad = static_cast<std::uint32_t>(t * (grad_span - 1) + 0.5);
      for (int c = 0; c < channels; ++c) {
        std::uint32_t noise =
            static_cast<std::uint32_t>(rng.next_double() * noise_span);
        img.pixels[i++] = grad + noise;
      }
    }
  }
  return img;
}

std::pair<std::int64_t, std::int64_t> signed_map_to_image(
    std::span<const std::int64_t> map, int width, int height,
    std::int64_t raw_min, std::int64_t raw_max, Image& out) {
  if (map.size() != static_cast<std::size_t>(width) * height)
    throw DimensionError("map size does not match dimensions");
  std::int64_t span = raw_max - raw_min;
  std::int64_t scale = span <= 65535 ? 1 : (span + 65534) / 65535;
  out.width = width;
  out.height = height;
  out.depth = 16;
  out.channels = 1;
  out.pixels.resize(map.size());
  for (std::size_t i = 0; i < map.size(); ++i) {
    std::int64_t shifted = map[i] - raw_min;
    std::int64_t stored = (shifted + scale / 2) / scale;
    out.pixels[i] = static_cast<std::uint32_t>(
        std::clamp<std::int64_t>(stored, 0, 65535));
  }
  return {raw_min, scale};
}

}  // namespace hopsim
