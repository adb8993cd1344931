#include <filesystem>
#include <memory>

#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "hopsim/designspace.hpp"
#include "hopsim/report.hpp"

namespace hoptool {

namespace {

struct DesignArgs {
  std::vector<double> io_rates = {40e9};
  int lanes = 9;
  double adc_constant = 5e12;
  bool include_zero = true;
  int max_precision = 8;
  std::string out_dir;
};

std::string rate_tag(double hz) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", hz);
  std::string s = buf;
  for (char& c : s)
    if (c == '+' || c == '.') c = '_';
  return s;
}

void run_design_space(const DesignArgs& args) {
  using namespace hopsim;
  std::filesystem::create_directories(args.out_dir);

  RunReport report("design-space");
  report.set_config("lanes", static_cast<std::int64_t>(args.lanes));
  report.set_config("adc_constant", args.adc_constant);
  report.set_config("include_zero", args.include_zero ? "true" : "false");
  report.set_config("max_precision",
                    static_cast<std::int64_t>(args.max_precision));

  nlohmann::ordered_json summary = nlohmann::ordered_json::array();
  for (double rate : args.io_rates) {
    DesignTables tables = generate_tables(rate, args.max_precision, args.lanes,
                                          args.adc_constant,
                                          args.include_zero);
    std::string tag = rate_tag(rate);
    report.set_config("io_rate_hz", rate);
    report.write_csv(args.out_dir + "/design_analog_io" + tag + ".csv",
                     design_csv(tables.analog));
    report.write_csv(args.out_dir + "/design_hybrid_io" + tag + ".csv",
                     design_csv(tables.hybrid));
    nlohmann::ordered_json entry =
        nlohmann::ordered_json::parse(design_json(tables));
    entry["io_rate_hz"] = rate;
    summary.push_back(entry);
  }

  RunReport summary_report("design-space");
  summary_report.set_config("lanes", static_cast<std::int64_t>(args.lanes));
  summary_report.set_config("adc_constant", args.adc_constant);
  summary_report.set_config("include_zero",
                            args.include_zero ? "true" : "false");
  summary_report.set_config("max_precision",
                            static_cast<std::int64_t>(args.max_precision));
  summary_report.put_json("tables", summary.dump());
  summary_report.write_json(args.out_dir + "/design_summary.json");
}

}  // namespace

void register_design_space(CLI::App& app) {
  auto args = std::make_shared<DesignArgs>();
  CLI::App* cmd = app.add_subcommand(
      "design-space",
      "ADC resolution / sampling rate / TOPS trade-off tables");
  cmd->add_option("--io-rate", args->io_rates,
                  "input data rates in Hz (comma separated)")
      ->delimiter(',')
      ->capture_default_str();
  cmd->add_option("--l", args->lanes, "operator lanes")->capture_default_str();
  cmd->add_option("--c", args->adc_constant,
                  "ADC speed-resolution constant (samples/s * levels)")
      ->capture_default_str();
  cmd->add_option("--include-zero", args->include_zero,
                  "count the zero output level (default true)")
      ->capture_default_str();
  cmd->add_option("--max-precision", args->max_precision,
                  "precision sweep upper bound")
      ->capture_default_str();
  cmd->add_option("--out", args->out_dir, "output directory")->required();
  cmd->callback([args]() { run_design_space(*args); });
}

}  // namespace hoptool
