#include <cmath>
#include <filesystem>
#include <iostream>
#include <memory>
#include <sstream>

#include "commands.hpp"
#include "hopsim/errors.hpp"
#include "hopsim/imaging.hpp"
#include "hopsim/report.hpp"

namespace hoptool {

namespace {

struct SweepArgs {
  std::string metric = "per";
  std::string vs = "snr";
  double from_db = 0.0;
  double to_db = 0.0;
  double step_db = 5.0;
  std::string image;
  std::string kernel_name = "prewitt_v";
  std::string scheme = "both";
  std::string noise_mode;  // electrical-snr (default) or weight-snr
  int split_groups = 1;
  int threads = 1;
  std::uint64_t seed = 0;
  std::string out_dir;
};

void run_sweep(const SweepArgs& args) {
  using namespace hopsim;

  if (args.metric != "per" && args.metric != "rmse")
    throw ConfigError("--metric must be per or rmse");
  if (args.vs != "snr" && args.vs != "osnr")
    throw ConfigError("--vs must be snr or osnr");
  if (args.from_db > args.to_db || args.step_db <= 0.0)
    throw ConfigError("sweep range is empty: need from <= to and step > 0");

  Image img = load_image(args.image);
  const Kernel& k = kernel(args.kernel_name);

  std::vector<Scheme> schemes;
  if (args.scheme == "both") {
    schemes.push_back(Scheme::kHybrid);
    if (args.metric == "rmse") schemes.push_back(Scheme::kAnalog);
  } else {
    schemes.push_back(scheme_from_string(args.scheme));
  }
  if (args.metric == "per")
    for (Scheme s : schemes)
      if (s == Scheme::kAnalog)
        throw ConfigError("per applies to the hybrid scheme only");

  NoiseMode mode;
  if (args.vs == "osnr") {
    mode = NoiseMode::kOpticalOsnr;
  } else if (args.noise_mode.empty() || args.noise_mode == "electrical-snr") {
    mode = NoiseMode::kElectricalSnr;
  } else if (args.noise_mode == "weight-snr") {
    mode = NoiseMode::kWeightSnr;
  } else {
    throw ConfigError("--noise-mode for a snr sweep must be electrical-snr "
                      "or weight-snr");
  }

  std::filesystem::create_directories(args.out_dir);
  RunReport report("sweep");
  report.set_config("metric", args.metric);
  report.set_config("vs", args.vs);
  report.set_config("from_db", args.from_db);
  report.set_config("to_db", args.to_db);
  report.set_config("step_db", args.step_db);
  report.set_config("image", args.image);
  report.set_config("kernel", args.kernel_name);
  report.set_config("scheme", args.scheme);
  report.set_config("noise_mode", to_string(mode));
  report.set_config("split_groups",
                    static_cast<std::int64_t>(args.split_groups));
  report.set_seed(args.seed);

  std::ostringstream body;
  body << "metric,vs,db,scheme,value,n\n";
  body.precision(17);

  struct Point { double db; Scheme scheme; double value; std::int64_t n; };
  std::vector<Point> points;
  for (double db = args.from_db; db <= args.to_db + 1e-9; db += args.step_db) {
    for (Scheme s : schemes) {
      ConvolveOptions opt;
      opt.scheme = s;
      opt.split_groups = args.split_groups;
      opt.threads = args.threads;
      opt.channel.mode = mode;
      opt.channel.seed = args.seed;
      if (args.vs == "osnr") opt.channel.osnr_db = db;
      else opt.channel.snr_db = db;
      ConvolveOutput out = convolve_sim(img, k, opt);
      double value = args.metric == "per" ? out.report.per : out.report.rmse;
      points.push_back({db, s, value, out.report.n});
      body << args.metric << ',' << args.vs << ',' << db << ','
           << to_string(s) << ',' << value << ',' << out.report.n << '\n';
    }
  }
  report.write_csv(args.out_dir + "/sweep.csv", body.str());

  // Post-pass: the metric should not increase with the ratio; warn (not
  // fail) when a rise is within twice its standard error.
  for (Scheme s : schemes) {
    const Point* prev = nullptr;
    for (const Point& p : points) {
      if (p.scheme != s) continue;
      if (prev && p.value > prev->value) {
        double se = 0.0;
        if (args.metric == "per")
          se = std::sqrt(std::max(p.value * (1.0 - p.value), 1e-12) /
                         static_cast<double>(p.n));
        double rise = p.value - prev->value;
        std::cerr << "warning: " << to_string(s) << " " << args.metric
                  << " rose from " << prev->value << " at " << prev->db
                  << " dB to " << p.value << " at " << p.db << " dB ("
                  << (se > 0.0 && rise < 2.0 * se
                          ? "within 2x standard error"
                          : "statistically significant")
                  << ")\n";
      }
      prev = &p;
    }
  }
}

}  // namespace

void register_sweep(CLI::App& app) {
  auto args = std::make_shared<SweepArgs>();
  CLI::App* cmd = app.add_subcommand(
      "sweep", "metric vs SNR/OSNR sweep over a convolution workload");
  cmd->add_option("--metric", args->metric, "per|rmse")->capture_default_str();
  cmd->add_option("--vs", args->vs, "snr|osnr")->capture_default_str();
  cmd->add_option("--from", args->from_db, "start of the dB range")->required();
  cmd->add_option("--to", args->to_db, "end of the dB range")->required();
  cmd->add_option("--step", args->step_db, "dB step")->capture_default_str();
  cmd->add_option("--image", args->image, "input PGM/PPM image")->required();
  cmd->add_option("--kernel", args->kernel_name, "operator name")
      ->capture_default_str();
  cmd->add_option("--scheme", args->scheme, "hybrid|analog|both")
      ->capture_default_str();
  cmd->add_option("--noise-mode", args->noise_mode,
                  "electrical-snr|weight-snr (snr sweeps)");
  cmd->add_option("--split-groups", args->split_groups,
                  "measurements per word")
      ->capture_default_str();
  cmd->add_option("--threads", args->threads,
                  "worker threads (identical output for any count)")
      ->capture_default_str();
  cmd->add_option("--seed", args->seed, "64-bit RNG seed")
      ->capture_default_str();
  cmd->add_option("--out", args->out_dir, "output directory")->required();
  cmd->callback([args]() { run_sweep(*args); });
}

}  // namespace hoptool
