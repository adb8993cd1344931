#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"
#include "hopsim/errors.hpp"
#include "hopsim/version.hpp"

namespace {

// Flat key=value run-config support: `--config FILE` anywhere after the
// subcommand expands to `--key=value` tokens in place. Keys match the long
// flag names; '#' starts a comment; explicit command-line flags win.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  std::vector<std::string> out;
  out.reserve(args.size());

  auto given_explicitly = [&args](const std::string& key) {
    std::string flag = "--" + key;
    for (const std::string& a : args)
      if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    return false;
  };

  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string file;
    if (args[i] == "--config") {
      if (i + 1 >= args.size())
        throw hopsim::ConfigError("--config needs a file path");
      file = args[i + 1];
      ++i;
    } else if (args[i].rfind("--config=", 0) == 0) {
      file = args[i].substr(9);
    } else {
      out.push_back(args[i]);
      continue;
    }
    std::ifstream cfg(file);
    if (!cfg) throw hopsim::IoError("cannot open config file: " + file);
    std::string line;
    int lineno = 0;
    while (std::getline(cfg, line)) {
      ++lineno;
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos) continue;
      auto last = line.find_last_not_of(" \t\r");
      line = line.substr(first, last - first + 1);
      auto eq = line.find('=');
      if (eq == std::string::npos)
        throw hopsim::ConfigError(file + ":" + std::to_string(lineno) +
                                  ": expected key=value");
      std::string key = line.substr(0, eq);
      std::string value = line.substr(eq + 1);
      auto trim = [](std::string& s) {
        auto b = s.find_first_not_of(" \t");
        auto e = s.find_last_not_of(" \t");
        s = b == std::string::npos ? "" : s.substr(b, e - b + 1);
      };
      trim(key);
      trim(value);
      if (key.empty())
        throw hopsim::ConfigError(file + ":" + std::to_string(lineno) +
                                  ": empty key");
      // Channel keys carry their canonical config-file names too.
      if (key == "mode") key = "noise-mode";
      else if (key == "snr_db") key = "snr";
      else if (key == "osnr_db") key = "osnr";
      else if (key == "isi_taps") key = "isi";
      if (!given_explicitly(key)) out.push_back("--" + key + "=" + value);
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hop - digital-analog hybrid optical MVM processor simulator"};
  app.set_version_flag("--version", hopsim::kVersion);
  app.require_subcommand(1);
  app.footer("Every subcommand also accepts --config FILE with flat "
             "key=value lines matching the long flag names.");

  hoptool::register_convolve(app);
  hoptool::register_sweep(app);
  hoptool::register_design_space(app);
  hoptool::register_mnist(app);
  hoptool::register_eq_demo(app);
  hoptool::register_gen_image(app);

  try {
    std::vector<std::string> args = expand_config(argc, argv);
    // CLI11 parses reversed argv without the program name.
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    reversed.pop_back();
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return hopsim::exit_code_for(e);
  }
  return 0;
}
