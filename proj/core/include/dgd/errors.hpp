#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dgd {

/// Invalid hyperparameter or configuration value. `key()` names the
/// offending field so that front ends can report it verbatim.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::invalid_argument(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// A solver produced a non-finite iterate (usually a step size that is too
/// large for the problem curvature).
class NumericalAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or truncated DGT file; `offset()` is the byte position at which
/// the problem was detected.
class DgtError : public std::runtime_error {
 public:
  DgtError(const std::string& what, std::uint64_t offset)
      : std::runtime_error(what + " (byte offset " + std::to_string(offset) + ")"), offset_(offset) {}
  std::uint64_t offset() const noexcept { return offset_; }

 private:
  std::uint64_t offset_;
};

}  // namespace dgd
