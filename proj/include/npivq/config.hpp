#pragma once

#include <map>
#include <string>
#include <vector>

#include "npivq/experiment.hpp"

namespace npivq {

/// Sectioned key=value config file. '#' starts a comment; keys are addressed
/// as "section.key" in error messages.
class ConfigFile {
 public:
  static ConfigFile parse_file(const std::string& path);
  static ConfigFile parse_string(const std::string& text, const std::string& origin = "<string>");

  bool has(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key) const;
  double get_double(const std::string& section, const std::string& key) const;
  int get_int(const std::string& section, const std::string& key) const;
  std::uint64_t get_u64(const std::string& section, const std::string& key) const;
  std::vector<std::string> get_list(const std::string& section, const std::string& key) const;

  std::string get_string_or(const std::string& section, const std::string& key,
                            const std::string& fallback) const;
  double get_double_or(const std::string& section, const std::string& key, double fallback) const;
  int get_int_or(const std::string& section, const std::string& key, int fallback) const;

 private:
  std::map<std::string, std::string> values_;  // "section.key" -> raw value
  std::string origin_;
};

/// Builds a validated ExperimentConfig from a config file.
ExperimentConfig experiment_config_from_file(const std::string& path);
ExperimentConfig experiment_config_from_string(const std::string& text);

}  // namespace npivq
