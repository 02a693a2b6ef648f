#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "dara/ra_classic.hpp"
#include "dara/scenario.hpp"

namespace dara {

/// Config error tied to one key (empty when not key-specific).
class ParseError : public ConfigError {
 public:
  ParseError(const std::string& message, std::string key, std::size_t line = 0);
  const std::string& key() const { return key_; }
  std::size_t line() const { return line_; }

 private:
  std::string key_;
  std::size_t line_;
};

/// Parses the flat `key = value` scenario format (`#` starts a comment).
///
/// Exactly one channel source must be given:
///   kind = static | linear_away | random_teleport   (path loss + mobility)
///   trace_path = <file>
///   synth_* keys                                    (synthetic trace)
/// Relative trace paths resolve against base_dir. Unknown keys, duplicate
/// keys and malformed values throw ParseError naming the key.
ScenarioConfig parse_scenario_config(std::string_view text, const std::filesystem::path& base_dir = {});

/// Reads and parses a config file; trace paths resolve relative to it.
ScenarioConfig load_scenario_config(const std::filesystem::path& path);

}  // namespace dara
