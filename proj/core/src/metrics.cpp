#include "hopsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hopsim/errors.hpp"

namespace hopsim {

double rmse(std::span<const double> expected, std::span<const double> actual) {
  if (expected.size() != actual.size())
    throw DimensionError("rmse: length mismatch " +
                         std::to_string(expected.size()) + " vs " +
                         std::to_string(actual.size()));
  if (expected.empty()) throw DimensionError("rmse: empty sequences");
  double acc = 0.0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    double e = actual[i] - expected[i];
    acc += e * e;
  }
  return std::sqrt(acc / static_cast<double>(expected.size()));
}

double pixel_error_rate(std::span<const std::int64_t> expected,
                        std::span<const std::int64_t> actual) {
  if (expected.size() != actual.size())
    throw DimensionError("per: length mismatch " +
                         std::to_string(expected.size()) + " vs " +
                         std::to_string(actual.size()));
  if (expected.empty()) throw DimensionError("per: empty sequences");
  std::int64_t bad = 0;
  for (std::size_t i = 0; i < expected.size(); ++i)
    if (expected[i] != actual[i]) ++bad;
  return static_cast<double>(bad) / static_cast<double>(expected.size());
}

double precision_bits(double sigma) {
  if (!(sigma > 0.0))
    throw DomainError("precision_bits needs sigma > 0, got " +
                      std::to_string(sigma));
  return std::log2(1.0 / (3.0 * sigma));
}

Histogram noise_histogram(std::span<const double> errors, int bins) {
  if (errors.size() < 100)
    throw ConfigError("noise_histogram needs >= 100 samples, got " +
                      std::to_string(errors.size()));
  if (bins < 1) throw ConfigError("noise_histogram needs >= 1 bin");

  double lo = errors[0], hi = errors[0];
  double sum = 0.0;
  for (double e : errors) {
    lo = std::min(lo, e);
    hi = std::max(hi, e);
    sum += e;
  }
  double mean = sum / static_cast<double>(errors.size());
  double var = 0.0;
  for (double e : errors) var += (e - mean) * (e - mean);
  var /= static_cast<double>(errors.size());

  Histogram h;
  h.fitted_sigma = std::sqrt(var);
  h.degenerate = (hi == lo);
  if (h.degenerate) {
    h.edges = {lo, hi};
    h.counts = {static_cast<std::int64_t>(errors.size())};
    return h;
  }
  h.edges.resize(static_cast<std::size_t>(bins) + 1);
  double width = (hi - lo) / bins;
  for (int b = 0; b <= bins; ++b) h.edges[static_cast<std::size_t>(b)] = lo + b * width;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  for (double e : errors) {
    int b = static_cast<int>((e - lo) / width);
    if (b >= bins) b = bins - 1;  // max value falls in the last bin
    ++h.counts[static_cast<std::size_t>(b)];
  }
  return h;
}

ConfusionMatrix confusion_matrix(std::span<const int> predictions,
                                 std::span<const int> labels, int classes) {
  if (predictions.size() != labels.size())
    throw DimensionError("confusion_matrix: length mismatch");
  if (classes < 1) throw ConfigError("confusion_matrix needs >= 1 class");
  ConfusionMatrix cm;
  cm.classes = classes;
  cm.counts.assign(static_cast<std::size_t>(classes) * classes, 0);
  std::int64_t correct = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    int y = labels[i], p = predictions[i];
    if (y < 0 || y >= classes || p < 0 || p >= classes)
      throw DomainError("class index outside [0, " + std::to_string(classes) +
                        ") at position " + std::to_string(i));
    ++cm.counts[static_cast<std::size_t>(y) * classes + p];
    if (y == p) ++correct;
  }
  cm.accuracy = labels.empty()
                    ? 0.0
                    : static_cast<double>(correct) /
                          static_cast<double>(labels.size());
  return cm;
}

std::string to_json(const ErrorReport& report, int indent) {
  nlohmann::ordered_json j;
  j["n"] = report.n;
  j["rmse"] = report.rmse;
  j["per"] = report.per;
  j["sigma"] = report.sigma;
  j["precision_bits"] = report.precision_bits;
  j["histogram"]["degenerate"] = report.histogram.degenerate;
  j["histogram"]["fitted_sigma"] = report.histogram.fitted_sigma;
  j["histogram"]["edges"] = report.histogram.edges;
  j["histogram"]["counts"] = report.histogram.counts;
  return j.dump(indent);
}

std::string histogram_csv(const Histogram& hist) {
  std::ostringstream out;
  out << "bin_left,bin_right,count\n";
  out.precision(17);
  for (std::size_t b = 0; b < hist.counts.size(); ++b)
    out << hist.edges[b] << ',' << hist.edges[b + 1] << ',' << hist.counts[b]
        << '\n';
  return out.str();
}

std::string confusion_csv(const ConfusionMatrix& cm) {
  std::ostringstream out;
  out << "label";
  for (int c = 0; c < cm.classes; ++c) out << ",pred_" << c;
  out << '\n';
  for (int y = 0; y < cm.classes; ++y) {
    out << y;
    for (int p = 0; p < cm.classes; ++p) out << ',' << cm.at(y, p);
    out << '\n';
  }
  return out.str();
}

}  // namespace hopsim
