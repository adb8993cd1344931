#include <filesystem>
#include <memory>
#include <sstream>

#include "commands.hpp"
#include "hopsim/errors.hpp"
#include "hopsim/nn.hpp"
#include "hopsim/report.hpp"

namespace hoptool {

namespace {

struct MnistArgs {
  std::string images_path;
  std::string labels_path;
  std::string weights_path;
  std::string conv_mode = "sim";
  int limit = 0;
  int synthetic_count = 1000;
  ChannelFlags channel;
  // train
  int epochs = 5;
  double lr = 0.05;
  std::string out_path;
  std::string out_dir;
};

hopsim::MnistSet load_set(const MnistArgs& args, std::uint64_t seed) {
  if (!args.images_path.empty() && !args.labels_path.empty())
    return hopsim::load_mnist(args.images_path, args.labels_path);
  if (args.images_path.empty() != args.labels_path.empty())
    throw hopsim::ConfigError("--images and --labels go together");
  return hopsim::make_synthetic_mnist(args.synthetic_count, seed);
}

void run_infer(const MnistArgs& args) {
  using namespace hopsim;
  MnistSet set = load_set(args, args.channel.seed);
  CnnWeights weights = args.weights_path.empty()
                           ? make_initial_weights(args.channel.seed)
                           : load_weights(args.weights_path);
  if (args.conv_mode != "sim" && args.conv_mode != "oracle")
    throw ConfigError("--conv-mode must be oracle or sim");

  InferOptions opt;
  opt.channel = args.channel.resolve();
  opt.limit = args.limit;
  InferResult result = run_inference(set, weights, opt);

  std::filesystem::create_directories(args.out_dir);
  RunReport report("mnist-infer");
  report.set_config("images", args.images_path.empty() ? "synthetic"
                                                       : args.images_path);
  report.set_config("labels", args.labels_path.empty() ? "synthetic"
                                                       : args.labels_path);
  report.set_config("weights", args.weights_path.empty() ? "seeded-random"
                                                         : args.weights_path);
  report.set_config("conv_mode", args.conv_mode);
  report.set_config("noise_mode", to_string(opt.channel.mode));
  report.set_config("snr_db", opt.channel.snr_db);
  report.set_config("limit", static_cast<std::int64_t>(args.limit));
  report.set_config("count",
                    static_cast<std::int64_t>(result.labels.size()));
  report.set_seed(opt.channel.seed);

  report.put("agreement", result.agreement);
  report.put("conv_word_per", result.conv_word_per);
  report.put("accuracy_oracle", result.confusion_oracle.accuracy);
  report.put("accuracy_sim", result.confusion_sim.accuracy);
  // Headline accuracy follows the selected conv mode; both paths always run
  // so the agreement between them is available.
  report.put("accuracy", args.conv_mode == "oracle"
                             ? result.confusion_oracle.accuracy
                             : result.confusion_sim.accuracy);
  report.write_json(args.out_dir + "/mnist_report.json");

  std::ostringstream body;
  body << "index,label,prediction_oracle,prediction_sim\n";
  for (std::size_t i = 0; i < result.labels.size(); ++i)
    body << i << ',' << result.labels[i] << ','
         << result.predictions_oracle[i] << ',' << result.predictions_sim[i]
         << '\n';
  report.write_csv(args.out_dir + "/predictions.csv", body.str());
  report.write_csv(args.out_dir + "/confusion_oracle.csv",
                   confusion_csv(result.confusion_oracle));
  report.write_csv(args.out_dir + "/confusion_sim.csv",
                   confusion_csv(result.confusion_sim));
}

void run_train(const MnistArgs& args) {
  using namespace hopsim;
  MnistSet set = load_set(args, args.channel.seed);
  if (args.limit > 0 && args.limit < set.count) {
    set.count = args.limit;
    set.images.resize(static_cast<std::size_t>(args.limit) * 784);
    set.labels.resize(static_cast<std::size_t>(args.limit));
  }
  TrainOptions opt;
  opt.epochs = args.epochs;
  opt.learning_rate = args.lr;
  opt.seed = args.channel.seed;
  TrainReport rep = train_dense(set, opt);
  save_weights(rep.weights, args.out_path);

  std::filesystem::path weights_path(args.out_path);
  RunReport report("mnist-train");
  report.set_config("images", args.images_path.empty() ? "synthetic"
                                                       : args.images_path);
  report.set_config("count", static_cast<std::int64_t>(set.count));
  report.set_config("epochs", static_cast<std::int64_t>(args.epochs));
  report.set_config("learning_rate", args.lr);
  report.set_seed(opt.seed);
  report.put("final_loss", rep.final_loss);
  report.put("train_accuracy", rep.train_accuracy);
  report.put("weights_file", weights_path.filename().string());
  report.write_json(weights_path.parent_path().empty()
                        ? "train_report.json"
                        : (weights_path.parent_path() / "train_report.json")
                              .string());
}

}  // namespace

void register_mnist(CLI::App& app) {
  CLI::App* cmd = app.add_subcommand(
      "mnist", "handwritten-digit CNN with a simulated conv layer");
  cmd->require_subcommand(1);

  auto infer_args = std::make_shared<MnistArgs>();
  CLI::App* infer = cmd->add_subcommand("infer", "classify images through "
                                                 "oracle and simulated conv");
  infer->add_option("--images", infer_args->images_path, "IDX images file");
  infer->add_option("--labels", infer_args->labels_path, "IDX labels file");
  infer->add_option("--weights", infer_args->weights_path,
                    "HOPCNN01 weights file (default seeded random)");
  infer->add_option("--conv-mode", infer_args->conv_mode, "oracle|sim")
      ->capture_default_str();
  infer->add_option("--limit", infer_args->limit, "cap the image count");
  infer->add_option("--synthetic-count", infer_args->synthetic_count,
                    "fixture count when no IDX files are given")
      ->capture_default_str();
  infer->add_option("--out", infer_args->out_dir, "output directory")
      ->required();
  infer_args->channel.attach(infer);
  infer->callback([infer_args]() { run_infer(*infer_args); });

  auto train_args = std::make_shared<MnistArgs>();
  CLI::App* train = cmd->add_subcommand("train", "SGD on the dense layers "
                                                 "over oracle conv features");
  train->add_option("--images", train_args->images_path, "IDX images file");
  train->add_option("--labels", train_args->labels_path, "IDX labels file");
  train->add_option("--out", train_args->out_path, "output weights file")
      ->required();
  train->add_option("--epochs", train_args->epochs, "training epochs")
      ->capture_default_str();
  train->add_option("--lr", train_args->lr, "SGD learning rate")
      ->capture_default_str();
  train->add_option("--limit", train_args->limit, "cap the sample count");
  train->add_option("--synthetic-count", train_args->synthetic_count,
                    "fixture count when no IDX files are given")
      ->capture_default_str();
  train->add_option("--seed", train_args->channel.seed, "64-bit RNG seed")
      ->capture_default_str();
  train->callback([train_args]() { run_train(*train_args); });
}

}  // namespace hoptool
