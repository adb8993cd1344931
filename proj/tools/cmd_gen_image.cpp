#include <memory>

#include "commands.hpp"
#include "hopsim/imaging.hpp"

namespace hoptool {

namespace {

struct GenArgs {
  int width = 451;
  int height = 300;
  int depth = 8;
  int channels = 1;
  std::uint64_t seed = 0;
  std::string out_path;
};

void run_gen_image(const GenArgs& args) {
  hopsim::Image img = hopsim::make_test_image(args.width, args.height,
                                              args.depth, args.seed,
                                              args.channels);
  hopsim::save_image(img, args.out_path);
}

}  // namespace

void register_gen_image(CLI::App& app) {
  auto args = std::make_shared<GenArgs>();
  CLI::App* cmd = app.add_subcommand(
      "gen-image", "write the deterministic test image (noise + gradient)");
  cmd->add_option("--width", args->width, "pixels")->capture_default_str();
  cmd->add_option("--height", args->height, "pixels")->capture_default_str();
  cmd->add_option("--depth", args->depth, "8|16")->capture_default_str();
  cmd->add_option("--channels", args->channels, "1|3")->capture_default_str();
  cmd->add_option("--seed", args->seed, "64-bit RNG seed")
      ->capture_default_str();
  cmd->add_option("--out", args->out_path, "output PGM/PPM path")->required();
  cmd->callback([args]() { run_gen_image(*args); });
}

}  // namespace hoptool
