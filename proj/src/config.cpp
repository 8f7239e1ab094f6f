#include "npivq/config.hpp"

#include <fstream>
#include <sstream>

#include "npivq/errors.hpp"

namespace npivq {

namespace {

std::string strip(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

ConfigFile ConfigFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str(), path);
}

ConfigFile ConfigFile::parse_string(const std::string& text, const std::string& origin) {
  ConfigFile cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string row = strip(line);
    if (row.empty()) continue;
    if (row.front() == '[') {
      if (row.back() != ']')
        throw InvalidInputError("config " + origin + ":" + std::to_string(lineno) +
                                ": malformed section header");
      section = strip(row.substr(1, row.size() - 2));
      continue;
    }
    const auto eq = row.find('=');
    if (eq == std::string::npos)
      throw InvalidInputError("config " + origin + ":" + std::to_string(lineno) +
                              ": expected key = value");
    const std::string key = strip(row.substr(0, eq));
    if (key.empty() || section.empty())
      throw InvalidInputError("config " + origin + ":" + std::to_string(lineno) +
                              ": key outside a [section]");
    cfg.values_[section + "." + key] = strip(row.substr(eq + 1));
  }
  return cfg;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  return values_.count(section + "." + key) > 0;
}

std::string ConfigFile::get_string(const std::string& section, const std::string& key) const {
  const auto it = values_.find(section + "." + key);
  if (it == values_.end())
    throw InvalidInputError("config " + origin_ + ": missing key " + section + "." + key);
  return it->second;
}

double ConfigFile::get_double(const std::string& section, const std::string& key) const {
  const std::string raw = get_string(section, key);
  try {
    std::size_t used = 0;
    const double v = std::stod(raw, &used);
    if (used != raw.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw InvalidInputError("config " + origin_ + ": key " + section + "." + key +
                            " is not a number: '" + raw + "'");
  }
}

int ConfigFile::get_int(const std::string& section, const std::string& key) const {
  const std::string raw = get_string(section, key);
  try {
    std::size_t used = 0;
    const long v = std::stol(raw, &used);
    if (used != raw.size()) throw std::invalid_argument("trailing");
    return static_cast<int>(v);
  } catch (const std::exception&) {
    throw InvalidInputError("config " + origin_ + ": key " + section + "." + key +
                            " is not an integer: '" + raw + "'");
  }
}

std::uint64_t ConfigFile::get_u64(const std::string& section, const std::string& key) const {
  const std::string raw = get_string(section, key);
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(raw, &used);
    if (used != raw.size()) throw std::invalid_argument("trailing");
    return static_cast<std::uint64_t>(v);
  } catch (const std::exception&) {
    throw InvalidInputError("config " + origin_ + ": key " + section + "." + key +
                            " is not an unsigned integer: '" + raw + "'");
  }
}

std::vector<std::string> ConfigFile::get_list(const std::string& section,
                                              const std::string& key) const {
  const std::string raw = get_string(section, key);
  std::vector<std::string> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string v = strip(item);
    if (!v.empty()) out.push_back(v);
  }
  if (out.empty())
    throw InvalidInputError("config " + origin_ + ": key " + section + "." + key +
                            " is an empty list");
  return out;
}

std::string ConfigFile::get_string_or(const std::string& section, const std::string& key,
                                      const std::string& fallback) const {
  return has(section, key) ? get_string(section, key) : fallback;
}

double ConfigFile::get_double_or(const std::string& section, const std::string& key,
                                 double fallback) const {
  return has(section, key) ? get_double(section, key) : fallback;
}

int ConfigFile::get_int_or(const std::string& section, const std::string& key,
                           int fallback) const {
  return has(section, key) ? get_int(section, key) : fallback;
}

namespace {

ExperimentConfig config_from(const ConfigFile& cfg) {
  ExperimentConfig out;
  out.dgp = make_dgp(regime_from_string(cfg.get_string("dgp", "regime")),
                     cfg.get_double("dgp", "zeta"), cfg.get_double("dgp", "p"),
                     cfg.get_double("dgp", "c_nu"), cfg.get_double("dgp", "c_h"),
                     cfg.get_double("dgp", "sigma_eta"), cfg.get_double("dgp", "rho_endog"),
                     cfg.get_int_or("dgp", "j_op", 200), cfg.get_int_or("dgp", "j_h", 200),
                     cfg.get_double_or("dgp", "ellipsoid", 10.0));
  for (const std::string& tok : cfg.get_list("experiment", "sample_sizes")) {
    try {
      out.sample_sizes.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw InvalidInputError("config: experiment.sample_sizes entry not an integer: " + tok);
    }
  }
  out.replications = cfg.get_int("experiment", "replications");
  out.master_seed = cfg.get_u64("experiment", "master_seed");
  for (const std::string& tok : cfg.get_list("experiment", "estimators"))
    out.estimators.push_back(estimator_from_string(tok));
  out.c0 = cfg.get_double_or("experiment", "c0", 0.5);
  out.c_big = cfg.get_double_or("experiment", "C0", 1.0);
  out.scale = cfg.get_double_or("experiment", "scale", 1.0);
  out.family = basis_family_from_string(cfg.get_string_or("experiment", "family", "cosine"));
  out.threads = cfg.get_int_or("experiment", "threads", 0);
  out.validate();
  return out;
}

}  // namespace

ExperimentConfig experiment_config_from_file(const std::string& path) {
  return config_from(ConfigFile::parse_file(path));
}

ExperimentConfig experiment_config_from_string(const std::string& text) {
  return config_from(ConfigFile::parse_string(text));
}

}  // namespace npivq
