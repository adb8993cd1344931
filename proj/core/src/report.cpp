#include "hopsim/report.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hopsim/errors.hpp"
#include "hopsim/version.hpp"

namespace hopsim {

struct RunReport::Impl {
  std::string command;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  nlohmann::ordered_json payload = nlohmann::ordered_json::object();
  std::uint64_t seed = 0;
  bool has_seed = false;

  nlohmann::ordered_json document() const {
    nlohmann::ordered_json doc;
    doc["command"] = command;
    doc["version"] = kVersion;
    doc["rng"] = kRngName;
    if (has_seed) doc["seed"] = seed;
    doc["config"] = config;
    for (auto& [k, v] : payload.items()) doc[k] = v;
    return doc;
  }
};

RunReport::RunReport(std::string command) : impl_(std::make_unique<Impl>()) {
  impl_->command = std::move(command);
}
RunReport::RunReport(RunReport&&) noexcept = default;
RunReport& RunReport::operator=(RunReport&&) noexcept = default;
RunReport::~RunReport() = default;

void RunReport::set_config(const std::string& key, const std::string& value) {
  impl_->config[key] = value;
}
void RunReport::set_config(const std::string& key, double value) {
  impl_->config[key] = value;
}
void RunReport::set_config(const std::string& key, std::int64_t value) {
  impl_->config[key] = value;
}
void RunReport::set_seed(std::uint64_t seed) {
  impl_->seed = seed;
  impl_->has_seed = true;
  impl_->config["seed"] = seed;
}

void RunReport::put(const std::string& key, double value) {
  impl_->payload[key] = value;
}
void RunReport::put(const std::string& key, std::int64_t value) {
  impl_->payload[key] = value;
}
void RunReport::put(const std::string& key, bool value) {
  impl_->payload[key] = value;
}
void RunReport::put(const std::string& key, const std::string& value) {
  impl_->payload[key] = value;
}
void RunReport::put_json(const std::string& key, const std::string& raw_json) {
  impl_->payload[key] = nlohmann::ordered_json::parse(raw_json);
}

std::string RunReport::to_json(int indent) const {
  return impl_->document().dump(indent) + "\n";
}

std::string RunReport::csv_preamble() const {
  std::ostringstream out;
  out << "# command=" << impl_->command << '\n';
  out << "# version=" << kVersion << '\n';
  out << "# rng=" << kRngName << '\n';
  if (impl_->has_seed) out << "# seed=" << impl_->seed << '\n';
  for (auto& [k, v] : impl_->config.items()) {
    if (k == "seed") continue;
    out << "# " << k << '=';
    if (v.is_string()) out << v.get<std::string>();
    else out << v.dump();
    out << '\n';
  }
  return out.str();
}

void RunReport::write_json(const std::string& path) const {
  write_text_file(path, to_json());
}

void RunReport::write_csv(const std::string& path,
                          const std::string& body) const {
  write_text_file(path, csv_preamble() + body);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("short write to " + path);
}

}  // namespace hopsim
