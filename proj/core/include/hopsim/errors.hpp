#pragma once

#include <exception>
#include <stdexcept>
#include <string>

namespace hopsim {

// Error taxonomy mapped to the CLI exit codes:
//   ConfigError and subclasses -> 2, IoError -> 3, NumericalError -> 4.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad parameters, out-of-domain values, mismatched dimensions, unknown names.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class DomainError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class DimensionError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class RangeError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// File-level problems: unreadable, malformed, truncated.
class IoError : public Error {
 public:
  using Error::Error;
};

class ParseError : public IoError {
 public:
  ParseError(const std::string& what, long long byte_offset)
      : IoError(what + " (byte offset " + std::to_string(byte_offset) + ")"),
        offset_(byte_offset) {}
  long long byte_offset() const { return offset_; }

 private:
  long long offset_;
};

// Divergence, corrupted signals, overflow guards.
class NumericalError : public Error {
 public:
  using Error::Error;
};

inline int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const NumericalError*>(&e)) return 4;
  if (dynamic_cast<const IoError*>(&e)) return 3;
  if (dynamic_cast<const ConfigError*>(&e)) return 2;
  return 1;
}

}  // namespace hopsim
