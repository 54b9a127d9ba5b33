#pragma once

// Flat key=value configuration.  One assignment per line, '#' starts a
// comment, blank lines are ignored.  Recognised keys and defaults are listed
// by config_help().

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fchlab/dynamics.hpp"
#include "fchlab/picard.hpp"

namespace fch {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::size_t line, std::string key, const std::string& message);
  /// 1-based line number; 0 when the error is not tied to a line.
  std::size_t line() const { return line_; }
  const std::string& key() const { return key_; }

 private:
  std::size_t line_;
  std::string key_;
};

struct RunConfig {
  SimConfig sim;
  PicardConfig picard;
  /// Keys that appeared in the text, in order.
  std::vector<std::string> keys;
};

/// Parses the text; keys listed in `required` must be present.
RunConfig parse_config(std::string_view text, const std::vector<std::string>& required = {});
RunConfig load_config(const std::string& path, const std::vector<std::string>& required = {});

/// Every key with its current value, in a form parse_config reads back.
std::string format_config(const RunConfig& config);

/// Table of keys, meanings and defaults.
std::string config_help();

}  // namespace fch
