#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hopsim {

// Closed-form ADC/throughput trade-off calculators.
//
// The analog scheme produces L*(2^M-1)*(2^N-1) nonzero output levels, the
// hybrid scheme L*(2^N-1); counting the zero level adds one. The published
// tables are only consistent with the zero level counted, so include_zero
// defaults to true; the equation-literal variant stays available behind the
// flag.
struct DesignPoint {
  int lanes = 9;             // L
  int input_bits = 8;        // M
  int weight_bits = 8;       // N
  double io_rate_hz = 40e9;  // DAC / pattern-generator rate
  double adc_constant = 5e12;  // c, samples/s * levels
  bool include_zero = true;
  int data_bit_depth = 8;    // p: input word length dividing hybrid throughput
};

std::int64_t levels_analog(int lanes, int input_bits, int weight_bits,
                           bool include_zero);
std::int64_t levels_hybrid(int lanes, int weight_bits, bool include_zero);

double enob(std::int64_t levels);

double adc_max_rate(std::int64_t levels, double adc_constant);

double system_speed(double adc_rate_hz, double io_rate_hz);

// 1 MAC = 1 op (the convention of the published tables).
double tops_analog(int lanes, double speed_hz);
double tops_hybrid(int lanes, double speed_hz, int data_bit_depth);

struct DesignRow {
  std::string scheme;  // "analog" | "hybrid"
  int precision_bits = 0;
  std::int64_t levels = 0;
  double enob_raw = 0.0;
  double adc_rate_hz = 0.0;
  double io_rate_hz = 0.0;
  double system_speed_hz = 0.0;
  double tops = 0.0;
};

struct DesignTables {
  std::vector<DesignRow> analog;  // precision column 1..max_precision
  std::vector<DesignRow> hybrid;
  // Largest precision at which the analog scheme still matches or beats the
  // hybrid scheme in TOPS; -1 when it never does.
  int tops_crossing_precision = -1;
};

// Table regeneration: M = N = precision column for the analog scheme,
// N = precision for the hybrid scheme with the hybrid throughput divided by
// a fixed 8-bit input word length.
DesignTables generate_tables(double io_rate_hz, int max_precision = 8,
                             int lanes = 9, double adc_constant = 5e12,
                             bool include_zero = true);

// CSV schema: scheme,precision_bits,enob_raw,enob_display,adc_rate_hz,
// io_rate_hz,system_speed_hz,tops. Display columns round the way the
// published tables do (ENOB to 0.1 bit, rates to 3 significant digits).
std::string design_csv(const std::vector<DesignRow>& rows);

std::string design_json(const DesignTables& tables, int indent = 2);

// Engineering-notation rate rounded to table precision, e.g. "11.3 GHz".
std::string format_rate(double hz);

}  // namespace hopsim
