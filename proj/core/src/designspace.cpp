#include "hopsim/designspace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hopsim/errors.hpp"

namespace hopsim {

namespace {

void check_bits(int lanes, int bits) {
  if (lanes < 1) throw DomainError("lane count must be >= 1");
  if (bits < 1 || bits > 24)
    throw DomainError("bit precision must be in [1, 24], got " +
                      std::to_string(bits));
}

std::string enob_display(double bits) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", bits);
  return buf;
}

}  // namespace

std::int64_t levels_analog(int lanes, int input_bits, int weight_bits,
                           bool include_zero) {
  check_bits(lanes, input_bits);
  check_bits(lanes, weight_bits);
  std::int64_t m = (std::int64_t{1} << input_bits) - 1;
  std::int64_t n = (std::int64_t{1} << weight_bits) - 1;
  return lanes * m * n + (include_zero ? 1 : 0);
}

std::int64_t levels_hybrid(int lanes, int weight_bits, bool include_zero) {
  check_bits(lanes, weight_bits);
  std::int64_t n = (std::int64_t{1} << weight_bits) - 1;
  return lanes * n + (include_zero ? 1 : 0);
}

double enob(std::int64_t levels) {
  if (levels < 1) throw DomainError("level count must be >= 1");
  return std::log2(static_cast<double>(levels));
}

double adc_max_rate(std::int64_t levels, double adc_constant) {
  if (levels < 1) throw DomainError("level count must be >= 1");
  if (!(adc_constant > 0.0)) throw DomainError("ADC constant must be positive");
  return adc_constant / static_cast<double>(levels);
}

double system_speed(double adc_rate_hz, double io_rate_hz) {
  if (!(adc_rate_hz > 0.0) || !(io_rate_hz > 0.0))
    throw DomainError("rates must be positive");
  return std::min(adc_rate_hz, io_rate_hz);
}

double tops_analog(int lanes, double speed_hz) {
  return lanes * speed_hz / 1e12;
}

double tops_hybrid(int lanes, double speed_hz, int data_bit_depth) {
  if (data_bit_depth < 1) throw DomainError("data bit depth must be >= 1");
  return lanes * speed_hz / (data_bit_depth * 1e12);
}

DesignTables generate_tables(double io_rate_hz, int max_precision, int lanes,
                             double adc_constant, bool include_zero) {
  DesignTables tables;
  for (int p = 1; p <= max_precision; ++p) {
    DesignRow a;
    a.scheme = "analog";
    a.precision_bits = p;
    a.levels = levels_analog(lanes, p, p, include_zero);
    a.enob_raw = enob(a.levels);
    a.adc_rate_hz = adc_max_rate(a.levels, adc_constant);
    a.io_rate_hz = io_rate_hz;
    a.system_speed_hz = system_speed(a.adc_rate_hz, io_rate_hz);
    a.tops = tops_analog(lanes, a.system_speed_hz);
    tables.analog.push_back(a);

    DesignRow h;
    h.scheme = "hybrid";
    h.precision_bits = p;
    h.levels = levels_hybrid(lanes, p, include_zero);
    h.enob_raw = enob(h.levels);
    h.adc_rate_hz = adc_max_rate(h.levels, adc_constant);
    h.io_rate_hz = io_rate_hz;
    h.system_speed_hz = system_speed(h.adc_rate_hz, io_rate_hz);
    h.tops = tops_hybrid(lanes, h.system_speed_hz, 8);
    tables.hybrid.push_back(h);
  }
  tables.tops_crossing_precision = -1;
  for (int i = 0; i < max_precision; ++i)
    if (tables.analog[static_cast<std::size_t>(i)].tops >=
        tables.hybrid[static_cast<std::size_t>(i)].tops)
      tables.tops_crossing_precision = i + 1;
  return tables;
}

std::string format_rate(double hz) {
  struct Unit { double scale; const char* name; };
  static constexpr Unit units[] = {
      {1e12, "THz"}, {1e9, "GHz"}, {1e6, "MHz"}, {1e3, "kHz"}, {1.0, "Hz"}};
  for (const Unit& u : units) {
    if (hz >= u.scale) {
      double v = hz / u.scale;
      char buf[48];
      if (v >= 100.0)
        std::snprintf(buf, sizeof buf, "%.0f %s", v, u.name);
      else
        std::snprintf(buf, sizeof buf, "%.1f %s", v, u.name);
      return buf;
    }
  }
  return "0 Hz";
}

std::string design_csv(const std::vector<DesignRow>& rows) {
  std::ostringstream out;
  out << "scheme,precision_bits,enob_raw,enob_display,adc_rate_hz,io_rate_hz,"
         "system_speed_hz,tops\n";
  out.precision(17);
  for (const DesignRow& r : rows) {
    out << r.scheme << ',' << r.precision_bits << ',' << r.enob_raw << ','
        << enob_display(r.enob_raw) << ',' << r.adc_rate_hz << ','
        << r.io_rate_hz << ',' << r.system_speed_hz << ',' << r.tops << '\n';
  }
  return out.str();
}

std::string design_json(const DesignTables& tables, int indent) {
  nlohmann::ordered_json j;
  auto fill = [](const std::vector<DesignRow>& rows) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const DesignRow& r : rows) {
      nlohmann::ordered_json row;
      row["scheme"] = r.scheme;
      row["precision_bits"] = r.precision_bits;
      row["levels"] = r.levels;
      row["enob_raw"] = r.enob_raw;
      row["enob_display"] = enob_display(r.enob_raw);
      row["adc_rate_hz"] = r.adc_rate_hz;
      row["adc_rate_display"] = format_rate(r.adc_rate_hz);
      row["io_rate_hz"] = r.io_rate_hz;
      row["system_speed_hz"] = r.system_speed_hz;
      row["system_speed_display"] = format_rate(r.system_speed_hz);
      row["tops"] = r.tops;
      arr.push_back(row);
    }
    return arr;
  };
  j["op_convention"] = "1 MAC = 1 op";
  j["analog"] = fill(tables.analog);
  j["hybrid"] = fill(tables.hybrid);
  j["tops_crossing_precision"] = tables.tops_crossing_precision;
  return j.dump(indent);
}

}  // namespace hopsim
