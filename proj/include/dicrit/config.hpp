#pragma once

#include <map>

#include "dicrit/criteria.hpp"

namespace dicrit {

struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error(what) {}
};

/// Flat key-value configuration with [section] headers (see docs/config.md).
struct ConfigFile {
  // section -> key -> raw value text
  std::map<std::string, std::map<std::string, std::string>> values;

  bool has(const std::string& section, const std::string& key) const;
  std::string get(const std::string& section, const std::string& key,
                  const std::string& fallback = "") const;
  static ConfigFile parse(const std::string& text);
  static ConfigFile load(const std::string& path);
};

struct AnalysisConfig {
  std::optional<FamilyParams> family;
  std::optional<std::string> form_2d;      // custom 2-variable form expression
  std::optional<std::string> candidate;    // candidate first integral, in (f, z)
  std::optional<std::string> rational_t;   // candidate rational function r(T)
  // monomialized f data, when f is not the plain monomial x^p y^q
  std::optional<int> mono_a, mono_b;
  std::optional<std::string> mono_v;

  int order = 12;
  double tol_hold = 1e-6;
  double tol_fail = 1e-2;
  bool exact = true;
  std::vector<std::string> checks;  // prop5, cor4, thm6, thm7, holonomy, section
  std::optional<std::string> csv_path;
  std::optional<std::string> holonomy_component;  // divisor variable for custom forms

  bool wants(const std::string& check) const;
};

AnalysisConfig parse_analysis_config(const ConfigFile& file);
AnalysisConfig load_analysis_config(const std::string& path);

}  // namespace dicrit
