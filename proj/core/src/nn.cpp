#include "hopsim/nn.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "hopsim/core_model.hpp"
#include "hopsim/errors.hpp"
#include "hopsim/imaging.hpp"
#include "hopsim/rng.hpp"

namespace hopsim {

namespace {

constexpr std::uint32_t kImagesMagic = 0x00000803;
constexpr std::uint32_t kLabelsMagic = 0x00000801;
constexpr char kWeightsMagic[8] = {'H', 'O', 'P', 'C', 'N', 'N', '0', '1'};

const std::array<const char*, kNumKernels> kConvKernelNames = {
    "prewitt_v", "prewitt_h", "prewitt_p45", "prewitt_m45"};

std::uint32_t read_be32(std::istream& in, const std::string& path,
                        long long offset) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (!in) throw ParseError(path + ": truncated header", offset);
  return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) |
         (std::uint32_t{b[2]} << 8) | b[3];
}

void write_le32(std::ostream& out, std::uint32_t v) {
  char b[4] = {static_cast<char>(v), static_cast<char>(v >> 8),
               static_cast<char>(v >> 16), static_cast<char>(v >> 24)};
  out.write(b, 4);
}

std::uint32_t read_le32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  return std::uint32_t{b[0]} | (std::uint32_t{b[1]} << 8) |
         (std::uint32_t{b[2]} << 16) | (std::uint32_t{b[3]} << 24);
}

void write_f32(std::ostream& out, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  write_le32(out, bits);
}

float bits_to_f32(std::uint32_t bits) {
  float v;
  std::memcpy(&v, &bits, 4);
  return v;
}

// 5x7 glyphs for the synthetic digit fixtures.
const char* const kGlyphs[10][7] = {
    {" ### ", "#   #", "#  ##", "# # #", "##  #", "#   #", " ### "},
    {"  #  ", " ##  ", "  #  ", "  #  ", "  #  ", "  #  ", " ### "},
    {" ### ", "#   #", "    #", "   # ", "  #  ", " #   ", "#####"},
    {" ### ", "#   #", "    #", "  ## ", "    #", "#   #", " ### "},
    {"   # ", "  ## ", " # # ", "#  # ", "#####", "   # ", "   # "},
    {"#####", "#    ", "#### ", "    #", "    #", "#   #", " ### "},
    {" ### ", "#    ", "#    ", "#### ", "#   #", "#   #", " ### "},
    {"#####", "    #", "   # ", "  #  ", " #   ", " #   ", " #   "},
    {" ### ", "#   #", "#   #", " ### ", "#   #", "#   #", " ### "},
    {" ### ", "#   #", "#   #", " ####", "    #", "    #", " ### "}};

struct ConvPlan {
  std::array<WeightVector, kNumKernels> weights;
  std::array<double, kNumKernels> feature_scale;  // 1 / (255 * amplitude)
};

ConvPlan make_plan(const CnnWeights& w) {
  ConvPlan plan;
  for (int k = 0; k < kNumKernels; ++k) {
    plan.weights[static_cast<std::size_t>(k)] =
        weights_from_ticks(w.conv[static_cast<std::size_t>(k)]);
    std::int64_t pos = 0, neg = 0;
    for (std::int32_t t : w.conv[static_cast<std::size_t>(k)]) {
      if (t > 0) pos += t;
      else neg -= t;
    }
    std::int64_t amp = std::max(pos, neg);
    if (amp == 0)
      throw ConfigError("conv kernel " + std::to_string(k) + " is all zero");
    plan.feature_scale[static_cast<std::size_t>(k)] =
        1.0 / (255.0 * static_cast<double>(amp));
  }
  return plan;
}

void check_dense_dims(const CnnWeights& w) {
  if (w.fc1_w.size() != static_cast<std::size_t>(kFc1In) * kFc1Out ||
      w.fc1_b.size() != kFc1Out ||
      w.fc2_w.size() != static_cast<std::size_t>(kFc1Out) * kFc2Out ||
      w.fc2_b.size() != kFc2Out)
    throw ConfigError("dense layer dimensions do not match the 676/100/10 "
                      "network");
}

}  // namespace

CnnWeights make_initial_weights(std::uint64_t seed) {
  CnnWeights w;
  for (int k = 0; k < kNumKernels; ++k) {
    const Kernel& src = kernel(kConvKernelNames[static_cast<std::size_t>(k)]);
    w.conv[static_cast<std::size_t>(k)] = src.ticks;
  }
  RandomStream rng(seed, 0);
  auto init = [&rng](std::vector<float>& v, std::size_t n, double scale) {
    v.resize(n);
    for (float& x : v)
      x = static_cast<float>(scale * rng.next_gaussian());
  };
  init(w.fc1_w, static_cast<std::size_t>(kFc1In) * kFc1Out,
       std::sqrt(2.0 / kFc1In));
  init(w.fc1_b, kFc1Out, 0.0);
  init(w.fc2_w, static_cast<std::size_t>(kFc1Out) * kFc2Out,
       std::sqrt(2.0 / kFc1Out));
  init(w.fc2_b, kFc2Out, 0.0);
  return w;
}

void save_weights(const CnnWeights& weights, const std::string& path) {
  check_dense_dims(weights);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write weights file: " + path);
  out.write(kWeightsMagic, 8);
  write_le32(out, kNumKernels);
  write_le32(out, kFc1In);
  write_le32(out, kFc1Out);
  write_le32(out, kFc2Out);
  for (const auto& k : weights.conv)
    for (std::int32_t t : k) write_f32(out, static_cast<float>(t));
  for (float v : weights.fc1_w) write_f32(out, v);
  for (float v : weights.fc1_b) write_f32(out, v);
  for (float v : weights.fc2_w) write_f32(out, v);
  for (float v : weights.fc2_b) write_f32(out, v);
  if (!out) throw IoError("short write to " + path);
}

CnnWeights load_weights(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open weights file: " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kWeightsMagic, 8) != 0)
    throw IoError(path + ": bad weights magic (expected HOPCNN01)");
  std::uint32_t n_kernels = read_le32(in);
  std::uint32_t fc1_in = read_le32(in);
  std::uint32_t fc1_out = read_le32(in);
  std::uint32_t fc2_out = read_le32(in);
  if (!in) throw IoError(path + ": truncated header");
  if (n_kernels != kNumKernels || fc1_in != kFc1In || fc1_out != kFc1Out ||
      fc2_out != kFc2Out)
    throw IoError(path + ": count mismatch (got " + std::to_string(n_kernels) +
                  "/" + std::to_string(fc1_in) + "/" +
                  std::to_string(fc1_out) + "/" + std::to_string(fc2_out) +
                  ", expected 4/676/100/10)");

  std::size_t floats = static_cast<std::size_t>(n_kernels) * 9 +
                       static_cast<std::size_t>(fc1_in) * fc1_out + fc1_out +
                       static_cast<std::size_t>(fc1_out) * fc2_out + fc2_out;
  std::vector<std::uint32_t> payload(floats);
  for (std::size_t i = 0; i < floats; ++i) {
    payload[i] = read_le32(in);
    if (!in) {
      std::streamoff have = 24 + static_cast<std::streamoff>(i) * 4;
      throw IoError(path + ": truncated payload, expected " +
                    std::to_string(24 + floats * 4) + " bytes, have about " +
                    std::to_string(have));
    }
  }

  CnnWeights w;
  std::size_t pos = 0;
  for (auto& k : w.conv)
    for (std::int32_t& t : k)
      t = static_cast<std::int32_t>(std::lround(bits_to_f32(payload[pos++])));
  auto take = [&](std::vector<float>& v, std::size_t n) {
    v.resize(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = bits_to_f32(payload[pos++]);
  };
  take(w.fc1_w, static_cast<std::size_t>(fc1_in) * fc1_out);
  take(w.fc1_b, fc1_out);
  take(w.fc2_w, static_cast<std::size_t>(fc1_out) * fc2_out);
  take(w.fc2_b, fc2_out);
  return w;
}

MnistSet load_mnist(const std::string& images_path,
                    const std::string& labels_path) {
  std::ifstream imgs(images_path, std::ios::binary);
  if (!imgs) throw IoError("cannot open MNIST images: " + images_path);
  std::uint32_t magic = read_be32(imgs, images_path, 0);
  if (magic != kImagesMagic)
    throw ParseError(images_path + ": bad images magic 0x" +
                     [&] { char b[16]; std::snprintf(b, 16, "%08x", magic);
                           return std::string(b); }(), 0);
  std::uint32_t count = read_be32(imgs, images_path, 4);
  std::uint32_t rows = read_be32(imgs, images_path, 8);
  std::uint32_t cols = read_be32(imgs, images_path, 12);
  if (rows != kMnistSide || cols != kMnistSide)
    throw ParseError(images_path + ": dimension header must read 28x28, got " +
                     std::to_string(rows) + "x" + std::to_string(cols), 8);

  MnistSet set;
  set.count = static_cast<int>(count);
  set.images.resize(static_cast<std::size_t>(count) * kMnistSide * kMnistSide);
  imgs.read(reinterpret_cast<char*>(set.images.data()),
            static_cast<std::streamsize>(set.images.size()));
  if (imgs.gcount() != static_cast<std::streamsize>(set.images.size()))
    throw ParseError(images_path + ": truncated pixel payload (" +
                     std::to_string(imgs.gcount()) + " of " +
                     std::to_string(set.images.size()) + " bytes)",
                     16 + imgs.gcount());

  std::ifstream labs(labels_path, std::ios::binary);
  if (!labs) throw IoError("cannot open MNIST labels: " + labels_path);
  std::uint32_t lmagic = read_be32(labs, labels_path, 0);
  if (lmagic != kLabelsMagic)
    throw ParseError(labels_path + ": bad labels magic 0x" +
                     [&] { char b[16]; std::snprintf(b, 16, "%08x", lmagic);
                           return std::string(b); }(), 0);
  std::uint32_t lcount = read_be32(labs, labels_path, 4);
  if (lcount != count)
    throw ParseError(labels_path + ": label count " + std::to_string(lcount) +
                     " does not match image count " + std::to_string(count), 4);
  set.labels.resize(count);
  labs.read(reinterpret_cast<char*>(set.labels.data()), count);
  if (labs.gcount() != static_cast<std::streamsize>(count))
    throw ParseError(labels_path + ": truncated label payload",
                     8 + labs.gcount());
  for (std::uint8_t l : set.labels)
    if (l > 9)
      throw ParseError(labels_path + ": label value " + std::to_string(l) +
                       " outside [0, 10)", 8);
  return set;
}

MnistSet make_synthetic_mnist(int count, std::uint64_t seed) {
  if (count < 1) throw ConfigError("synthetic set needs >= 1 image");
  MnistSet set;
  set.count = count;
  set.images.assign(static_cast<std::size_t>(count) * kMnistSide * kMnistSide,
                    0);
  set.labels.resize(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    int label = i % 10;
    set.labels[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(label);
    RandomStream rng(seed, static_cast<std::uint64_t>(i));
    std::uint8_t* img = set.images.data() +
                        static_cast<std::size_t>(i) * kMnistSide * kMnistSide;
    // Background speckle.
    for (int p = 0; p < kMnistSide * kMnistSide; ++p)
      img[p] = static_cast<std::uint8_t>(rng.next_double() * 32.0);
    // Glyph scaled 3x, jittered by up to 2 pixels.
    int jx = 4 + static_cast<int>(rng.next_double() * 5.0);
    int jy = 2 + static_cast<int>(rng.next_double() * 5.0);
    for (int gy = 0; gy < 7; ++gy) {
      for (int gx = 0; gx < 5; ++gx) {
        if (kGlyphs[label][gy][gx] != '#') continue;
        for (int dy = 0; dy < 3; ++dy) {
          for (int dx = 0; dx < 3; ++dx) {
            int x = jx + gx * 3 + dx;
            int y = jy + gy * 3 + dy;
            double v = 200.0 + rng.next_double() * 55.0;
            img[y * kMnistSide + x] = static_cast<std::uint8_t>(v);
          }
        }
      }
    }
  }
  return set;
}

ForwardResult forward(std::span<const std::uint8_t> image,
                      const CnnWeights& weights, ConvMode mode,
                      const Channel& channel, std::uint64_t stream_base) {
  if (image.size() != kMnistSide * kMnistSide)
    throw DimensionError("forward expects a 28x28 image");
  check_dense_dims(weights);
  ConvPlan plan = make_plan(weights);

  ForwardResult result;
  result.conv_raw.resize(static_cast<std::size_t>(kNumKernels) * kConvSide *
                         kConvSide);

  std::vector<double> features(static_cast<std::size_t>(kNumKernels) *
                               kConvSide * kConvSide);
  std::vector<BinaryWord> word(9);
  for (int k = 0; k < kNumKernels; ++k) {
    const WeightVector& wv = plan.weights[static_cast<std::size_t>(k)];
    for (int y = 0; y < kConvSide; ++y) {
      for (int x = 0; x < kConvSide; ++x) {
        std::size_t patch_idx =
            static_cast<std::size_t>(y) * kConvSide + x;
        std::int64_t raw;
        if (mode == ConvMode::kOracle) {
          raw = 0;
          for (int dy = 0; dy < 3; ++dy)
            for (int dx = 0; dx < 3; ++dx)
              raw += static_cast<std::int64_t>(
                         image[static_cast<std::size_t>(y + dy) * kMnistSide +
                               (x + dx)]) *
                     weights.conv[static_cast<std::size_t>(k)]
                                 [static_cast<std::size_t>(dy * 3 + dx)];
        } else {
          for (int dy = 0; dy < 3; ++dy)
            for (int dx = 0; dx < 3; ++dx)
              word[static_cast<std::size_t>(dy * 3 + dx)] = BinaryWord{
                  image[static_cast<std::size_t>(y + dy) * kMnistSide +
                        (x + dx)],
                  8};
          std::uint64_t stream = stream_base +
                                 static_cast<std::uint64_t>(k) * kConvSide *
                                     kConvSide +
                                 patch_idx;
          raw = hybrid_inner_product(word, wv, channel, stream).raw_ticks;
        }
        std::size_t out_idx = static_cast<std::size_t>(k) * kConvSide *
                                  kConvSide +
                              patch_idx;
        result.conv_raw[out_idx] = raw;
        features[out_idx] = static_cast<double>(raw) *
                            plan.feature_scale[static_cast<std::size_t>(k)];
      }
    }
  }

  // ReLU, 2x2 max-pool stride 2, flatten with kernel index fastest.
  std::vector<double> x(static_cast<std::size_t>(kFc1In));
  for (int py = 0; py < kPoolSide; ++py) {
    for (int px = 0; px < kPoolSide; ++px) {
      for (int k = 0; k < kNumKernels; ++k) {
        double best = 0.0;  // ReLU floor
        for (int dy = 0; dy < 2; ++dy)
          for (int dx = 0; dx < 2; ++dx) {
            std::size_t idx = static_cast<std::size_t>(k) * kConvSide *
                                  kConvSide +
                              static_cast<std::size_t>(2 * py + dy) *
                                  kConvSide +
                              (2 * px + dx);
            best = std::max(best, features[idx]);
          }
        x[(static_cast<std::size_t>(py) * kPoolSide + px) * kNumKernels + k] =
            best;
      }
    }
  }

  std::array<double, kFc1Out> hidden{};
  for (int o = 0; o < kFc1Out; ++o) {
    double acc = weights.fc1_b[static_cast<std::size_t>(o)];
    for (int i = 0; i < kFc1In; ++i)
      acc += x[static_cast<std::size_t>(i)] *
             weights.fc1_w[static_cast<std::size_t>(i) * kFc1Out + o];
    hidden[static_cast<std::size_t>(o)] = acc > 0.0 ? acc : 0.0;
  }
  for (int o = 0; o < kFc2Out; ++o) {
    double acc = weights.fc2_b[static_cast<std::size_t>(o)];
    for (int i = 0; i < kFc1Out; ++i)
      acc += hidden[static_cast<std::size_t>(i)] *
             weights.fc2_w[static_cast<std::size_t>(i) * kFc2Out + o];
    result.logits[static_cast<std::size_t>(o)] = acc;
  }
  result.prediction = 0;
  for (int c = 1; c < kFc2Out; ++c)
    if (result.logits[static_cast<std::size_t>(c)] >
        result.logits[static_cast<std::size_t>(result.prediction)])
      result.prediction = c;
  return result;
}

TrainReport train_dense(const MnistSet& data, const TrainOptions& options) {
  if (data.count < 1) throw ConfigError("training needs at least one sample");
  if (options.epochs < 0) throw ConfigError("epochs must be >= 0");

  CnnWeights w = make_initial_weights(options.seed);
  ConvPlan plan = make_plan(w);

  // Frozen conv features, computed once.
  const int n = data.count;
  std::vector<double> feats(static_cast<std::size_t>(n) * kFc1In);
  for (int i = 0; i < n; ++i) {
    ForwardResult f = forward(data.image(i), w, ConvMode::kOracle);
    // Recompute pooled features exactly as forward() does.
    std::vector<double> conv(static_cast<std::size_t>(kNumKernels) *
                             kConvSide * kConvSide);
    for (std::size_t j = 0; j < conv.size(); ++j)
      conv[j] = static_cast<double>(f.conv_raw[j]) *
                plan.feature_scale[j / (kConvSide * kConvSide)];
    for (int py = 0; py < kPoolSide; ++py)
      for (int px = 0; px < kPoolSide; ++px)
        for (int k = 0; k < kNumKernels; ++k) {
          double best = 0.0;
          for (int dy = 0; dy < 2; ++dy)
            for (int dx = 0; dx < 2; ++dx)
              best = std::max(
                  best,
                  conv[static_cast<std::size_t>(k) * kConvSide * kConvSide +
                       static_cast<std::size_t>(2 * py + dy) * kConvSide +
                       (2 * px + dx)]);
          feats[static_cast<std::size_t>(i) * kFc1In +
                (static_cast<std::size_t>(py) * kPoolSide + px) * kNumKernels +
                k] = best;
        }
  }

  std::vector<double> w1(w.fc1_w.begin(), w.fc1_w.end());
  std::vector<double> b1(w.fc1_b.begin(), w.fc1_b.end());
  std::vector<double> w2(w.fc2_w.begin(), w.fc2_w.end());
  std::vector<double> b2(w.fc2_b.begin(), w.fc2_b.end());

  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;

  double last_loss = 0.0;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    RandomStream shuffle_rng(options.seed, 1 + static_cast<std::uint64_t>(epoch));
    for (int i = n - 1; i > 0; --i) {
      int j = static_cast<int>(shuffle_rng.next_double() * (i + 1));
      std::swap(order[static_cast<std::size_t>(i)],
                order[static_cast<std::size_t>(j)]);
    }
    double loss_acc = 0.0;
    for (int idx : order) {
      const double* x = feats.data() + static_cast<std::size_t>(idx) * kFc1In;
      int label = data.labels[static_cast<std::size_t>(idx)];

      std::array<double, kFc1Out> h{}, hpre{};
      for (int o = 0; o < kFc1Out; ++o) {
        double acc = b1[static_cast<std::size_t>(o)];
        for (int i2 = 0; i2 < kFc1In; ++i2)
          acc += x[i2] * w1[static_cast<std::size_t>(i2) * kFc1Out + o];
        hpre[static_cast<std::size_t>(o)] = acc;
        h[static_cast<std::size_t>(o)] = acc > 0.0 ? acc : 0.0;
      }
      std::array<double, kFc2Out> logits{};
      double peak = -1e300;
      for (int o = 0; o < kFc2Out; ++o) {
        double acc = b2[static_cast<std::size_t>(o)];
        for (int i2 = 0; i2 < kFc1Out; ++i2)
          acc += h[static_cast<std::size_t>(i2)] *
                 w2[static_cast<std::size_t>(i2) * kFc2Out + o];
        logits[static_cast<std::size_t>(o)] = acc;
        peak = std::max(peak, acc);
      }
      double denom = 0.0;
      std::array<double, kFc2Out> p{};
      for (int o = 0; o < kFc2Out; ++o) {
        p[static_cast<std::size_t>(o)] =
            std::exp(logits[static_cast<std::size_t>(o)] - peak);
        denom += p[static_cast<std::size_t>(o)];
      }
      for (double& v : p) v /= denom;
      double loss = -std::log(std::max(p[static_cast<std::size_t>(label)],
                                       1e-300));
      if (!std::isfinite(loss))
        throw NumericalError("training loss became non-finite");
      loss_acc += loss;

      // Backprop: dlogits = p - onehot.
      std::array<double, kFc2Out> dlog = p;
      dlog[static_cast<std::size_t>(label)] -= 1.0;
      std::array<double, kFc1Out> dh{};
      for (int o = 0; o < kFc2Out; ++o) {
        double g = dlog[static_cast<std::size_t>(o)];
        for (int i2 = 0; i2 < kFc1Out; ++i2) {
          dh[static_cast<std::size_t>(i2)] +=
              g * w2[static_cast<std::size_t>(i2) * kFc2Out + o];
          w2[static_cast<std::size_t>(i2) * kFc2Out + o] -=
              options.learning_rate * g * h[static_cast<std::size_t>(i2)];
        }
        b2[static_cast<std::size_t>(o)] -= options.learning_rate * g;
      }
      for (int o = 0; o < kFc1Out; ++o) {
        if (hpre[static_cast<std::size_t>(o)] <= 0.0) continue;
        double g = dh[static_cast<std::size_t>(o)];
        for (int i2 = 0; i2 < kFc1In; ++i2)
          w1[static_cast<std::size_t>(i2) * kFc1Out + o] -=
              options.learning_rate * g * x[i2];
        b1[static_cast<std::size_t>(o)] -= options.learning_rate * g;
      }
    }
    last_loss = loss_acc / n;
  }

  TrainReport report;
  report.weights = w;
  auto cast_back = [](const std::vector<double>& src, std::vector<float>& dst) {
    dst.resize(src.size());
    for (std::size_t i = 0; i < src.size(); ++i)
      dst[i] = static_cast<float>(src[i]);
  };
  cast_back(w1, report.weights.fc1_w);
  cast_back(b1, report.weights.fc1_b);
  cast_back(w2, report.weights.fc2_w);
  cast_back(b2, report.weights.fc2_b);
  report.final_loss = last_loss;

  std::int64_t correct = 0;
  for (int i = 0; i < n; ++i) {
    ForwardResult f = forward(data.image(i), report.weights, ConvMode::kOracle);
    if (f.prediction == data.labels[static_cast<std::size_t>(i)]) ++correct;
  }
  report.train_accuracy = static_cast<double>(correct) / n;
  return report;
}

InferResult run_inference(const MnistSet& data, const CnnWeights& weights,
                          const InferOptions& options) {
  int n = options.limit > 0 ? std::min(options.limit, data.count) : data.count;
  if (n < 1) throw ConfigError("inference needs at least one image");

  Channel chan;
  chan.spec = options.channel;
  chan.source_lane_count = 9;

  if (options.channel.mode == NoiseMode::kElectricalSnr) {
    // Workload reference: AC RMS over the ideal conv slot levels.
    ConvPlan plan = make_plan(weights);
    AcRmsAccumulator acc(1);
    for (int i = 0; i < n; ++i) {
      auto img = data.image(i);
      for (int k = 0; k < kNumKernels; ++k) {
        const WeightVector& wv = plan.weights[static_cast<std::size_t>(k)];
        double gs = wv.grid_step();
        for (int y = 0; y < kConvSide; ++y)
          for (int x = 0; x < kConvSide; ++x)
            for (int bit = 0; bit < 8; ++bit) {
              std::int64_t level = 0;
              for (int dy = 0; dy < 3; ++dy)
                for (int dx = 0; dx < 3; ++dx)
                  if ((img[static_cast<std::size_t>(y + dy) * kMnistSide +
                           (x + dx)] >> bit) & 1u)
                    level += wv.ticks[static_cast<std::size_t>(dy * 3 + dx)];
              acc.add(0, static_cast<double>(level) * gs);
            }
      }
    }
    chan.electrical_ref_rms = acc.pooled_ac_rms();
  }

  InferResult result;
  result.labels.reserve(static_cast<std::size_t>(n));
  result.predictions_oracle.reserve(static_cast<std::size_t>(n));
  result.predictions_sim.reserve(static_cast<std::size_t>(n));

  const std::uint64_t words_per_image =
      static_cast<std::uint64_t>(kNumKernels) * kConvSide * kConvSide;
  std::int64_t agree = 0;
  std::int64_t conv_words = 0, conv_bad = 0;
  for (int i = 0; i < n; ++i) {
    ForwardResult oracle = forward(data.image(i), weights, ConvMode::kOracle);
    ForwardResult sim =
        forward(data.image(i), weights, ConvMode::kSimulated, chan,
                static_cast<std::uint64_t>(i) * words_per_image);
    result.labels.push_back(data.labels[static_cast<std::size_t>(i)]);
    result.predictions_oracle.push_back(oracle.prediction);
    result.predictions_sim.push_back(sim.prediction);
    if (oracle.prediction == sim.prediction) ++agree;
    for (std::size_t j = 0; j < oracle.conv_raw.size(); ++j) {
      ++conv_words;
      if (oracle.conv_raw[j] != sim.conv_raw[j]) ++conv_bad;
    }
  }
  result.agreement = static_cast<double>(agree) / n;
  result.conv_word_per =
      static_cast<double>(conv_bad) / static_cast<double>(conv_words);
  result.confusion_oracle =
      confusion_matrix(result.predictions_oracle, result.labels, 10);
  result.confusion_sim =
      confusion_matrix(result.predictions_sim, result.labels, 10);
  return result;
}

}  // namespace hopsim
