#pragma once

#include <cstdint>
#include <memory>
#include <string>

namespace hopsim {

// Reproducibility contract: every artifact embeds the resolved config, the
// seed, the RNG identity, and the code version. No timestamps, so re-running
// with an identical config yields byte-identical files.
class RunReport {
 public:
  explicit RunReport(std::string command);
  RunReport(RunReport&&) noexcept;
  RunReport& operator=(RunReport&&) noexcept;
  ~RunReport();

  void set_config(const std::string& key, const std::string& value);
  void set_config(const std::string& key, double value);
  void set_config(const std::string& key, std::int64_t value);
  void set_seed(std::uint64_t seed);

  void put(const std::string& key, double value);
  void put(const std::string& key, std::int64_t value);
  void put(const std::string& key, bool value);
  void put(const std::string& key, const std::string& value);
  // Embeds a pre-serialized JSON document under the key.
  void put_json(const std::string& key, const std::string& raw_json);

  std::string to_json(int indent = 2) const;
  // "# key=value" comment block prepended to CSV artifacts.
  std::string csv_preamble() const;

  void write_json(const std::string& path) const;
  void write_csv(const std::string& path, const std::string& body) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

void write_text_file(const std::string& path, const std::string& content);

}  // namespace hopsim
