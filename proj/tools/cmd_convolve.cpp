#include <filesystem>
#include <memory>
#include <sstream>

#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "hopsim/errors.hpp"
#include "hopsim/imaging.hpp"
#include "hopsim/report.hpp"

namespace hoptool {

namespace {

struct ConvolveArgs {
  std::string image;
  std::string kernel_name;
  std::string scheme = "hybrid";
  int depth = 0;  // 0 = take from the file
  int split_groups = 1;
  int threads = 1;
  std::string out_dir;
  std::string map_format = "pgm";
  ChannelFlags channel;
};

void run_convolve(const ConvolveArgs& args) {
  using namespace hopsim;

  Image img = load_image(args.image);
  if (args.depth != 0 && args.depth != img.depth)
    throw ConfigError("--depth " + std::to_string(args.depth) +
                      " does not match the image depth " +
                      std::to_string(img.depth));

  ConvolveOptions opt;
  opt.scheme = scheme_from_string(args.scheme);
  opt.split_groups = args.split_groups;
  opt.threads = args.threads;
  opt.channel = args.channel.resolve();

  const Kernel& k = kernel(args.kernel_name);
  std::filesystem::create_directories(args.out_dir);

  auto stamp = [&](RunReport& r) {
    r.set_config("image", args.image);
    r.set_config("kernel", args.kernel_name);
    r.set_config("scheme", args.scheme);
    r.set_config("depth", static_cast<std::int64_t>(img.depth));
    r.set_config("channels", static_cast<std::int64_t>(img.channels));
    r.set_config("split_groups",
                 static_cast<std::int64_t>(args.split_groups));
    r.set_config("noise_mode", to_string(opt.channel.mode));
    r.set_config("snr_db", opt.channel.snr_db);
    r.set_config("osnr_db", opt.channel.osnr_db);
    r.set_seed(opt.channel.seed);
  };
  RunReport report("convolve");
  stamp(report);

  // Channel-wise processing; streams offset per channel plane.
  std::vector<ConvolveOutput> planes;
  const std::size_t words_per_plane =
      static_cast<std::size_t>(img.width - 2) * (img.height - 2);
  for (int c = 0; c < img.channels; ++c)
    planes.push_back(convolve_sim(img, k, opt, c,
                                  static_cast<std::uint64_t>(c) *
                                      words_per_plane));

  // Pooled metrics across channels.
  std::vector<double> errors;
  std::vector<std::int64_t> oracle_all, sim_all;
  for (const ConvolveOutput& p : planes) {
    errors.insert(errors.end(), p.errors.begin(), p.errors.end());
    oracle_all.insert(oracle_all.end(), p.oracle.begin(), p.oracle.end());
    if (opt.scheme == Scheme::kHybrid)
      sim_all.insert(sim_all.end(), p.hybrid_map.begin(), p.hybrid_map.end());
  }
  ErrorReport err;
  err.n = static_cast<std::int64_t>(errors.size());
  std::vector<double> zeros(errors.size(), 0.0);
  err.rmse = rmse(zeros, errors);
  err.histogram = noise_histogram(errors, 101);
  err.sigma = err.histogram.fitted_sigma;
  err.precision_bits = err.sigma > 0.0 ? precision_bits(err.sigma) : 0.0;
  if (opt.scheme == Scheme::kHybrid)
    err.per = pixel_error_rate(oracle_all, sim_all);

  report.put("out_width", static_cast<std::int64_t>(planes[0].out_width));
  report.put("out_height", static_cast<std::int64_t>(planes[0].out_height));
  report.put("normalizer", planes[0].normalizer);
  if (opt.channel.mode == NoiseMode::kElectricalSnr)
    report.put("electrical_ref_rms", planes[0].electrical_ref_rms);
  report.put("per_applies", opt.scheme == Scheme::kHybrid);
  report.put_json("error_report", to_json(err));
  report.write_json(args.out_dir + "/convolve_report.json");
  report.write_csv(args.out_dir + "/noise_histogram.csv",
                   histogram_csv(err.histogram));

  if (opt.scheme == Scheme::kHybrid) {
    if (args.map_format == "csv") {
      std::ostringstream body;
      body << "row,col";
      for (int c = 0; c < img.channels; ++c) body << ",channel_" << c;
      body << '\n';
      for (int y = 0; y < planes[0].out_height; ++y)
        for (int x = 0; x < planes[0].out_width; ++x) {
          body << y << ',' << x;
          for (const ConvolveOutput& p : planes)
            body << ','
                 << p.hybrid_map[static_cast<std::size_t>(y) *
                                     p.out_width +
                                 x];
          body << '\n';
        }
      report.write_csv(args.out_dir + "/convolve_map.csv", body.str());
    } else {
      // Offset-shifted 16-bit image with an affine sidecar.
      std::int64_t raw_min =
          k.weights().min_level() * static_cast<std::int64_t>(img.max_value());
      std::int64_t raw_max =
          k.weights().max_level() * static_cast<std::int64_t>(img.max_value());
      Image out_img;
      out_img.channels = img.channels;
      std::pair<std::int64_t, std::int64_t> affine{0, 1};
      if (img.channels == 1) {
        affine = signed_map_to_image(planes[0].hybrid_map, planes[0].out_width,
                                     planes[0].out_height, raw_min, raw_max,
                                     out_img);
      } else {
        Image tmp;
        out_img.width = planes[0].out_width;
        out_img.height = planes[0].out_height;
        out_img.depth = 16;
        out_img.pixels.resize(static_cast<std::size_t>(out_img.width) *
                              out_img.height * img.channels);
        for (int c = 0; c < img.channels; ++c) {
          affine = signed_map_to_image(
              planes[static_cast<std::size_t>(c)].hybrid_map,
              out_img.width, out_img.height, raw_min, raw_max, tmp);
          for (std::size_t i = 0; i < tmp.pixels.size(); ++i)
            out_img.pixels[i * static_cast<std::size_t>(img.channels) +
                           static_cast<std::size_t>(c)] = tmp.pixels[i];
        }
      }
      std::string map_path = args.out_dir + (img.channels == 3
                                                 ? "/convolve_map.ppm"
                                                 : "/convolve_map.pgm");
      save_image(out_img, map_path);

      nlohmann::ordered_json side;
      side["formula"] = "raw = stored * scale + offset";
      side["offset"] = affine.first;
      side["scale"] = affine.second;
      side["raw_min"] = raw_min;
      side["raw_max"] = raw_max;
      side["width"] = out_img.width;
      side["height"] = out_img.height;
      side["channels"] = img.channels;
      RunReport sidecar("convolve-map");
      stamp(sidecar);
      sidecar.put_json("map", side.dump());
      sidecar.write_json(args.out_dir + "/convolve_map.json");
    }
  } else {
    // Continuous analog outputs have no integer map; emit them as CSV.
    std::ostringstream body;
    body << "row,col";
    for (int c = 0; c < img.channels; ++c) body << ",channel_" << c;
    body << '\n';
    body.precision(17);
    for (int y = 0; y < planes[0].out_height; ++y)
      for (int x = 0; x < planes[0].out_width; ++x) {
        body << y << ',' << x;
        for (const ConvolveOutput& p : planes)
          body << ','
               << p.analog_map[static_cast<std::size_t>(y) * p.out_width + x];
        body << '\n';
      }
    report.write_csv(args.out_dir + "/convolve_map.csv", body.str());
  }
}

}  // namespace

void register_convolve(CLI::App& app) {
  auto args = std::make_shared<ConvolveArgs>();
  CLI::App* cmd = app.add_subcommand(
      "convolve", "convolve an image through the simulated MVM core");
  cmd->add_option("--image", args->image, "input PGM/PPM image")->required();
  cmd->add_option("--kernel", args->kernel_name, "operator name")->required();
  cmd->add_option("--scheme", args->scheme, "hybrid|analog")
      ->capture_default_str();
  cmd->add_option("--depth", args->depth, "expected bit depth (8|16)");
  cmd->add_option("--split-groups", args->split_groups,
                  "measurements per word (1, 3, or 9)")
      ->capture_default_str();
  cmd->add_option("--out", args->out_dir, "output directory")->required();
  cmd->add_option("--map-format", args->map_format, "pgm|csv")
      ->capture_default_str();
  cmd->add_option("--threads", args->threads,
                  "worker threads (identical output for any count)")
      ->capture_default_str();
  args->channel.attach(cmd);
  cmd->callback([args]() { run_convolve(*args); });
}

}  // namespace hoptool
