#include "dicrit/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "dicrit/parser.hpp"

namespace dicrit {

static std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  auto it = values.find(section);
  return it != values.end() && it->second.count(key) > 0;
}

std::string ConfigFile::get(const std::string& section, const std::string& key,
                            const std::string& fallback) const {
  auto it = values.find(section);
  if (it == values.end()) return fallback;
  auto kt = it->second.find(key);
  return kt == it->second.end() ? fallback : kt->second;
}

ConfigFile ConfigFile::parse(const std::string& text) {
  ConfigFile out;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw ConfigError("line " + std::to_string(lineno) + ": unterminated section");
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(t.substr(0, eq));
    std::string val = trim(t.substr(eq + 1));
    if (val.size() >= 2 && val.front() == '"' && val.back() == '"')
      val = val.substr(1, val.size() - 2);
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    out.values[section][key] = val;
  }
  return out;
}

ConfigFile ConfigFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

bool AnalysisConfig::wants(const std::string& check) const {
  return std::find(checks.begin(), checks.end(), check) != checks.end();
}

static int parse_int(const std::string& s, const std::string& what) {
  try {
    size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (...) {
    throw ConfigError("invalid integer for " + what + ": '" + s + "'");
  }
}

static double parse_double(const std::string& s, const std::string& what) {
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (...) {
    throw ConfigError("invalid number for " + what + ": '" + s + "'");
  }
}

AnalysisConfig parse_analysis_config(const ConfigFile& file) {
  AnalysisConfig cfg;
  cfg.order = file.has("numeric", "order")
                  ? parse_int(file.get("numeric", "order"), "numeric.order")
                  : 12;
  if (file.has("numeric", "tol"))
    cfg.tol_hold = parse_double(file.get("numeric", "tol"), "numeric.tol");
  if (file.has("numeric", "tol_fail"))
    cfg.tol_fail = parse_double(file.get("numeric", "tol_fail"), "numeric.tol_fail");
  if (file.has("numeric", "exact"))
    cfg.exact = file.get("numeric", "exact") != "false";

  if (file.values.count("family")) {
    FamilyParams fp;
    fp.p = parse_int(file.get("family", "p", "1"), "family.p");
    fp.q = parse_int(file.get("family", "q", "1"), "family.q");
    fp.k = parse_int(file.get("family", "k", "2"), "family.k");
    fp.n = parse_int(file.get("family", "n", "1"), "family.n");
    VarSet tvar{"t"};
    try {
      if (file.has("family", "alpha")) {
        TruncSeries a = parse_series(file.get("family", "alpha"), tvar, kInfOrder);
        if (!a.is_constant()) throw ConfigError("family.alpha must be a constant");
        fp.alpha = a.constant_term();
        fp.alpha_sq = *fp.alpha * *fp.alpha;
      } else if (file.has("family", "alpha_sq")) {
        TruncSeries a = parse_series(file.get("family", "alpha_sq"), tvar, kInfOrder);
        if (!a.is_constant()) throw ConfigError("family.alpha_sq must be a constant");
        fp.alpha_sq = a.constant_term();
      } else {
        throw ConfigError("family needs alpha or alpha_sq");
      }
      fp.U = parse_series(file.get("family", "U", "1"), tvar, kInfOrder);
    } catch (const ParseError& e) {
      throw ConfigError(std::string("family expression: ") + e.what());
    }
    try {
      fp.validate();
    } catch (const Error& e) {
      throw ConfigError(std::string("invalid family: ") + e.what());
    }
    cfg.family = fp;
  }

  if (file.has("form", "omega")) cfg.form_2d = file.get("form", "omega");
  if (!cfg.family && !cfg.form_2d)
    throw ConfigError("config needs a [family] section or [form] omega");

  if (file.has("candidate", "F")) cfg.candidate = file.get("candidate", "F");
  if (file.has("candidate", "r")) cfg.rational_t = file.get("candidate", "r");

  if (file.values.count("monomialized")) {
    cfg.mono_a = parse_int(file.get("monomialized", "a", "1"), "monomialized.a");
    cfg.mono_b = parse_int(file.get("monomialized", "b", "1"), "monomialized.b");
    cfg.mono_v = file.get("monomialized", "V", "1");
  }

  std::string checks = file.get("checks", "run", "");
  if (checks.empty()) {
    cfg.checks = {"prop5", "cor4", "thm6", "thm7", "holonomy"};
  } else {
    std::istringstream cs(checks);
    std::string item;
    while (std::getline(cs, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      static const std::vector<std::string> known{
          "prop5", "cor4", "thm6", "thm7", "holonomy", "section", "blowup",
          "verify-integral", "classify"};
      if (std::find(known.begin(), known.end(), item) == known.end())
        throw ConfigError("unknown check: " + item);
      cfg.checks.push_back(item);
    }
  }
  if (file.has("output", "csv")) cfg.csv_path = file.get("output", "csv");
  if (file.has("holonomy", "component"))
    cfg.holonomy_component = file.get("holonomy", "component");
  return cfg;
}

AnalysisConfig load_analysis_config(const std::string& path) {
  return parse_analysis_config(ConfigFile::load(path));
}

}  // namespace dicrit
