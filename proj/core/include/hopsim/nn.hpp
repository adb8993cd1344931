#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hopsim/channel.hpp"
#include "hopsim/metrics.hpp"

namespace hopsim {

// 28x28 inputs: valid 3x3 conv -> 26x26, ReLU, 2x2 max-pool -> 13x13,
// flatten (row, column, kernel fastest) -> 676, dense 100, dense 10.
inline constexpr int kMnistSide = 28;
inline constexpr int kConvSide = 26;
inline constexpr int kPoolSide = 13;
inline constexpr int kNumKernels = 4;
inline constexpr int kFc1In = kPoolSide * kPoolSide * kNumKernels;  // 676
inline constexpr int kFc1Out = 100;
inline constexpr int kFc2Out = 10;

struct CnnWeights {
  // Fixed edge-detection front end: the four compass operators
  // (prewitt_v, prewitt_h, prewitt_p45, prewitt_m45).
  std::array<std::array<std::int32_t, 9>, kNumKernels> conv{};
  std::vector<float> fc1_w;  // kFc1In x kFc1Out, input-major
  std::vector<float> fc1_b;  // kFc1Out
  std::vector<float> fc2_w;  // kFc1Out x kFc2Out, input-major
  std::vector<float> fc2_b;  // kFc2Out
};

// Compass conv front end plus seeded small random dense layers.
CnnWeights make_initial_weights(std::uint64_t seed);

// Weight file: magic "HOPCNN01", LE u32 counts (n_kernels, fc1_in, fc1_out,
// fc2_out), then LE f32 payload in declaration order (conv kernels, fc1
// weights, fc1 biases, fc2 weights, fc2 biases).
void save_weights(const CnnWeights& weights, const std::string& path);
CnnWeights load_weights(const std::string& path);

struct MnistSet {
  std::vector<std::uint8_t> images;  // n x 784
  std::vector<std::uint8_t> labels;  // n, values in [0, 10)
  int count = 0;

  std::span<const std::uint8_t> image(int i) const {
    return {images.data() + static_cast<std::size_t>(i) * kMnistSide *
                                kMnistSide,
            static_cast<std::size_t>(kMnistSide * kMnistSide)};
  }
};

// IDX container pair (images magic 0x00000803 with 28x28 dims, labels magic
// 0x00000801); image and label counts must agree.
MnistSet load_mnist(const std::string& images_path,
                    const std::string& labels_path);

// Deterministic stand-in when the MNIST files are absent: scaled 5x7 digit
// glyphs with seeded noise, labels cycling 0..9.
MnistSet make_synthetic_mnist(int count, std::uint64_t seed);

enum class ConvMode { kOracle, kSimulated };

struct ForwardResult {
  std::array<double, kFc2Out> logits{};
  int prediction = 0;
  std::vector<std::int64_t> conv_raw;  // integer conv outputs, kernel-major
};

// channel/word streams: word index = stream_base + kernel * 676 + patch.
// In simulated mode the conv layer runs through the hybrid core with
// M = 8-bit inputs; oracle mode computes the exact integer dot products.
// Both normalize features by (255 * operator amplitude) before ReLU.
ForwardResult forward(std::span<const std::uint8_t> image,
                      const CnnWeights& weights, ConvMode mode,
                      const Channel& channel = {},
                      std::uint64_t stream_base = 0);

struct TrainOptions {
  int epochs = 5;
  double learning_rate = 0.05;
  std::uint64_t seed = 0;
};

struct TrainReport {
  CnnWeights weights;
  double final_loss = 0.0;
  double train_accuracy = 0.0;
};

// Plain SGD with softmax cross-entropy on the dense layers only; the conv
// front end stays frozen. Deterministic given the seed.
TrainReport train_dense(const MnistSet& data, const TrainOptions& options);

struct InferOptions {
  ChannelSpec channel;
  int limit = 0;  // 0 = all
};

struct InferResult {
  std::vector<int> labels;
  std::vector<int> predictions_oracle;
  std::vector<int> predictions_sim;
  double agreement = 0.0;      // oracle vs simulated predictions
  double conv_word_per = 0.0;  // integer conv outputs differing
  ConfusionMatrix confusion_oracle;
  ConfusionMatrix confusion_sim;
};

// Runs every image through both conv modes and compares.
InferResult run_inference(const MnistSet& data, const CnnWeights& weights,
                          const InferOptions& options);

}  // namespace hopsim
