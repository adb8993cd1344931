#include <cmath>
#include <vector>

#include "doctest.h"
#include "hopsim/errors.hpp"
#include "hopsim/metrics.hpp"
#include "hopsim/rng.hpp"

using namespace hopsim;

TEST_CASE("rmse basics") {
  std::vector<double> a = {1.0, 2.0, 3.0};
  CHECK(rmse(a, a) == 0.0);

  std::vector<double> zeros = {0.0, 0.0}, halves = {0.5, 0.5};
  CHECK(rmse(zeros, halves) == doctest::Approx(0.5));

  std::vector<double> x = {0.0, 0.0}, y = {3.0, 4.0};
  CHECK(rmse(x, y) == doctest::Approx(std::sqrt(12.5)));

  std::vector<double> short_seq = {1.0};
  CHECK_THROWS_AS(rmse(a, short_seq), DimensionError);
}

TEST_CASE("rmse of a constant offset is the offset magnitude") {
  RandomStream rng(13, 0);
  std::vector<double> x(500), y(500);
  for (int i = 0; i < 500; ++i) {
    x[static_cast<std::size_t>(i)] = rng.next_gaussian();
    y[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] - 0.37;
  }
  CHECK(rmse(x, y) == doctest::Approx(0.37).epsilon(1e-12));
}

TEST_CASE("pixel error rate counts exact integer mismatches") {
  std::vector<std::int64_t> a(1000, 7), b(1000, 7);
  CHECK(pixel_error_rate(a, b) == 0.0);
  b[123] = 8;
  CHECK(pixel_error_rate(a, b) == doctest::Approx(1e-3));
  std::vector<std::int64_t> c(1000, 9);
  CHECK(pixel_error_rate(a, c) == 1.0);
}

TEST_CASE("per is invariant under bijective relabeling") {
  std::vector<std::int64_t> a = {1, 2, 3, 2, 1, 4};
  std::vector<std::int64_t> b = {1, 2, 4, 2, 2, 4};
  double before = pixel_error_rate(a, b);
  auto relabel = [](std::int64_t v) { return 10 * v + 3; };
  std::vector<std::int64_t> ra, rb;
  for (std::int64_t v : a) ra.push_back(relabel(v));
  for (std::int64_t v : b) rb.push_back(relabel(v));
  CHECK(pixel_error_rate(ra, rb) == before);
}

TEST_CASE("precision_bits uses the 3-sigma convention") {
  CHECK(precision_bits(0.027) == doctest::Approx(3.63).epsilon(0.01 / 3.63));
  CHECK(precision_bits(1.0 / 3.0) == doctest::Approx(0.0));
  CHECK(precision_bits(1.0 / (3.0 * 256.0)) == doctest::Approx(8.0));
  CHECK_THROWS_AS(precision_bits(0.0), DomainError);
  CHECK_THROWS_AS(precision_bits(-1.0), DomainError);
  CHECK(precision_bits(0.01) > precision_bits(0.02));  // strictly decreasing
}

TEST_CASE("noise histogram fits the sample sigma") {
  RandomStream rng(17, 0);
  const int n = 100000;
  std::vector<double> errs(static_cast<std::size_t>(n));
  for (double& e : errs) e = 0.027 * rng.next_gaussian();
  Histogram h = noise_histogram(errs, 101);
  CHECK_FALSE(h.degenerate);
  CHECK(std::fabs(h.fitted_sigma - 0.027) / 0.027 < 0.02);
  std::int64_t total = 0;
  for (std::int64_t c : h.counts) total += c;
  CHECK(total == n);
}

TEST_CASE("all-zero errors give a degenerate single-bin histogram") {
  std::vector<double> errs(500, 0.0);
  Histogram h = noise_histogram(errs, 51);
  CHECK(h.degenerate);
  CHECK(h.fitted_sigma == 0.0);
  REQUIRE(h.counts.size() == 1);
  CHECK(h.counts[0] == 500);
}

TEST_CASE("histogram rejects tiny samples") {
  std::vector<double> errs(99, 0.0);
  CHECK_THROWS_AS(noise_histogram(errs, 10), ConfigError);
}

TEST_CASE("confusion matrix counts and accuracy") {
  std::vector<int> labels = {0, 1, 2, 2, 1, 0};
  SUBCASE("perfect prediction") {
    ConfusionMatrix cm = confusion_matrix(labels, labels, 3);
    CHECK(cm.accuracy == 1.0);
    CHECK(cm.at(0, 0) == 2);
    CHECK(cm.at(1, 1) == 2);
    CHECK(cm.at(2, 2) == 2);
    CHECK(cm.at(0, 1) == 0);
  }
  SUBCASE("constant prediction fills one column") {
    std::vector<int> pred(6, 1);
    ConfusionMatrix cm = confusion_matrix(pred, labels, 3);
    for (int y = 0; y < 3; ++y) {
      CHECK(cm.at(y, 1) == 2);
      CHECK(cm.at(y, 0) == 0);
      CHECK(cm.at(y, 2) == 0);
    }
    CHECK(cm.accuracy == doctest::Approx(2.0 / 6.0));
  }
  SUBCASE("hand-checked toy case") {
    std::vector<int> pred = {0, 1, 1, 2, 0, 0};
    ConfusionMatrix cm = confusion_matrix(pred, labels, 3);
    CHECK(cm.at(0, 0) == 2);  // labels 0 -> predictions 0, 0
    CHECK(cm.at(1, 1) == 1);
    CHECK(cm.at(1, 0) == 1);
    CHECK(cm.at(2, 1) == 1);
    CHECK(cm.at(2, 2) == 1);
    CHECK(cm.accuracy == doctest::Approx(4.0 / 6.0));
    // Row sums equal per-class label counts.
    for (int y = 0; y < 3; ++y) {
      std::int64_t row = 0;
      for (int p = 0; p < 3; ++p) row += cm.at(y, p);
      CHECK(row == 2);
    }
  }
  SUBCASE("out-of-range classes rejected") {
    std::vector<int> pred = {0, 1, 3, 2, 1, 0};
    CHECK_THROWS_AS(confusion_matrix(pred, labels, 3), DomainError);
  }
}

TEST_CASE("error report serializes to JSON") {
  ErrorReport rep;
  rep.n = 3;
  rep.rmse = 0.5;
  rep.per = 0.0;
  rep.sigma = 0.1;
  rep.precision_bits = precision_bits(0.1);
  std::vector<double> errs(200, 0.0);
  errs[0] = 1.0;
  rep.histogram = noise_histogram(errs, 11);
  std::string j = to_json(rep);
  CHECK(j.find("\"rmse\"") != std::string::npos);
  CHECK(j.find("\"histogram\"") != std::string::npos);
}
