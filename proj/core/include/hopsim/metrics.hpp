#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace hopsim {

struct Histogram {
  std::vector<double> edges;       // bins + 1 entries
  std::vector<std::int64_t> counts;
  double fitted_sigma = 0.0;       // sample standard deviation
  bool degenerate = false;         // all samples identical
};

struct ErrorReport {
  double rmse = 0.0;
  double per = 0.0;
  double sigma = 0.0;
  double precision_bits = 0.0;  // from sigma; 0 when sigma is degenerate
  Histogram histogram;
  std::int64_t n = 0;
};

double rmse(std::span<const double> expected, std::span<const double> actual);

double pixel_error_rate(std::span<const std::int64_t> expected,
                        std::span<const std::int64_t> actual);

// log2(1 / (3 sigma)): 3-sigma (99.7% confidence) precision convention.
double precision_bits(double sigma);

// Equal-width bins over [min, max]; needs >= 100 samples.
Histogram noise_histogram(std::span<const double> errors, int bins);

struct ConfusionMatrix {
  int classes = 0;
  std::vector<std::int64_t> counts;  // row = label, column = prediction
  double accuracy = 0.0;

  std::int64_t at(int label, int predicted) const {
    return counts[static_cast<std::size_t>(label) * classes + predicted];
  }
};

ConfusionMatrix confusion_matrix(std::span<const int> predictions,
                                 std::span<const int> labels, int classes);

// JSON serialization (metadata is attached by the report module).
std::string to_json(const ErrorReport& report, int indent = 2);

// CSV rows "bin_left,bin_right,count".
std::string histogram_csv(const Histogram& hist);

std::string confusion_csv(const ConfusionMatrix& cm);

}  // namespace hopsim
