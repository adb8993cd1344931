#include <filesystem>
#include <memory>
#include <sstream>

#include "commands.hpp"
#include "hopsim/dsp.hpp"
#include "hopsim/report.hpp"

namespace hoptool {

namespace {

struct EqArgs {
  std::vector<double> isi_taps = {1.0, 0.4, 0.2};
  double snr_db = 30.0;
  int taps = 51;
  double mu = 1e-3;
  int train_symbols = 10000;
  int eval_symbols = 10000;
  std::uint64_t seed = 0;
  std::string out_dir;
};

void run_eq_demo(const EqArgs& args) {
  using namespace hopsim;
  EqDemoConfig cfg;
  cfg.isi_taps = args.isi_taps;
  cfg.snr_db = args.snr_db;
  cfg.taps = args.taps;
  cfg.step_size = args.mu;
  cfg.train_symbols = args.train_symbols;
  cfg.eval_symbols = args.eval_symbols;
  cfg.seed = args.seed;
  EqDemoResult result = hopsim::run_eq_demo(cfg);

  std::filesystem::create_directories(args.out_dir);
  RunReport report("eq-demo");
  {
    std::ostringstream isi;
    for (std::size_t i = 0; i < args.isi_taps.size(); ++i)
      isi << (i ? "," : "") << args.isi_taps[i];
    report.set_config("isi", isi.str());
  }
  report.set_config("snr_db", args.snr_db);
  report.set_config("taps", static_cast<std::int64_t>(args.taps));
  report.set_config("mu", args.mu);
  report.set_config("train_symbols",
                    static_cast<std::int64_t>(args.train_symbols));
  report.set_config("eval_symbols",
                    static_cast<std::int64_t>(args.eval_symbols));
  report.set_seed(args.seed);
  report.put("pre_mse", result.pre_mse);
  report.put("post_mse", result.post_mse);
  report.put("mse_ratio", result.post_mse / result.pre_mse);
  report.put("pre_ser", result.pre_ser);
  report.put("post_ser", result.post_ser);
  report.write_json(args.out_dir + "/eq_report.json");

  // Block-averaged training MSE curve.
  std::ostringstream body;
  body << "symbol,mse\n";
  body.precision(17);
  const std::size_t block = 100;
  for (std::size_t start = 0; start < result.mse_curve.size();
       start += block) {
    std::size_t end = std::min(start + block, result.mse_curve.size());
    double acc = 0.0;
    for (std::size_t i = start; i < end; ++i) acc += result.mse_curve[i];
    body << start << ',' << acc / static_cast<double>(end - start) << '\n';
  }
  report.write_csv(args.out_dir + "/eq_mse.csv", body.str());
}

}  // namespace

void register_eq_demo(CLI::App& app) {
  auto args = std::make_shared<EqArgs>();
  CLI::App* cmd = app.add_subcommand(
      "eq-demo", "T/2-spaced LMS equalizer over an ISI channel");
  cmd->add_option("--isi", args->isi_taps, "channel FIR taps")
      ->delimiter(',')
      ->capture_default_str();
  cmd->add_option("--snr", args->snr_db, "electrical SNR in dB")
      ->capture_default_str();
  cmd->add_option("--taps", args->taps, "equalizer tap count (odd)")
      ->capture_default_str();
  cmd->add_option("--mu", args->mu, "LMS step size")->capture_default_str();
  cmd->add_option("--train-symbols", args->train_symbols,
                  "training sequence length")
      ->capture_default_str();
  cmd->add_option("--eval-symbols", args->eval_symbols,
                  "held-out evaluation length")
      ->capture_default_str();
  cmd->add_option("--seed", args->seed, "64-bit RNG seed")
      ->capture_default_str();
  cmd->add_option("--out", args->out_dir, "output directory")->required();
  cmd->callback([args]() { run_eq_demo(*args); });
}

}  // namespace hoptool
