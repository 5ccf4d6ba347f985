#include "lpweak/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "lpweak/runner.hpp"

namespace lpweak {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

const std::vector<std::string> kGlobalKeys = {
    "length", "samples", "dim", "sharpness", "seed", "scale_m", "dict_size"};

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::string section;        // "global" or scenario name
  bool in_global = false;
  ScenarioRequest* current = nullptr;
  int lineno = 0;

  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
      const std::string inner = trim(t.substr(1, t.size() - 2));
      if (inner == "global") {
        in_global = true;
        current = nullptr;
        section = inner;
        continue;
      }
      const std::string prefix = "scenario";
      if (inner.rfind(prefix, 0) == 0) {
        const std::string name = trim(inner.substr(prefix.size()));
        if (name.empty())
          throw ConfigError("line " + std::to_string(lineno) + ": scenario section needs a name");
        if (!find_scenario(name))
          throw ConfigError("line " + std::to_string(lineno) + ": unknown scenario '" + name + "'");
        cfg.scenarios.push_back(ScenarioRequest{name, {}});
        current = &cfg.scenarios.back();
        in_global = false;
        section = name;
        continue;
      }
      throw ConfigError("line " + std::to_string(lineno) + ": unknown section '" + inner + "'");
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
    double num = 0.0;
    try {
      std::size_t used = 0;
      num = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      throw ConfigError("line " + std::to_string(lineno) + ": non-numeric value '" + value + "'");
    }

    if (in_global) {
      if (std::find(kGlobalKeys.begin(), kGlobalKeys.end(), key) == kGlobalKeys.end())
        throw ConfigError("line " + std::to_string(lineno) + ": unknown global key '" + key + "'");
      if (key == "length") {
        cfg.length = num;
        cfg.global_grid_overrides["length"] = num;
      } else if (key == "samples") {
        cfg.samples = static_cast<std::size_t>(num);
        cfg.global_grid_overrides["samples"] = num;
      } else if (key == "dim") {
        cfg.dim = static_cast<int>(num);
        cfg.global_grid_overrides["dim"] = num;
      } else if (key == "sharpness") {
        cfg.sharpness = num;
      } else if (key == "seed") {
        cfg.seed = static_cast<std::uint64_t>(num);
      } else if (key == "scale_m") {
        cfg.scale_m = static_cast<int>(num);
      } else if (key == "dict_size") {
        cfg.dict_size = static_cast<std::size_t>(num);
      }
      continue;
    }
    if (!current)
      throw ConfigError("line " + std::to_string(lineno) + ": key outside any section");
    const ScenarioInfo* info = find_scenario(current->name);
    const auto& allowed = info->allowed_keys;
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key +
                        "' for scenario '" + current->name + "'");
    current->numbers[key] = num;
  }

  // validation
  if (cfg.dim != 1 && cfg.dim != 2) throw ConfigError("dim must be 1 or 2");
  if (!is_power_of_two(cfg.samples) || cfg.samples < 8)
    throw ConfigError("samples must be a power of two >= 8");
  if (!(cfg.length > 0.0)) throw ConfigError("length must be positive");
  if (!(cfg.sharpness > 0.0)) throw ConfigError("sharpness must be positive");
  if (cfg.scale_m < 1) throw ConfigError("scale_m must be >= 1");
  if (cfg.dict_size < 8) throw ConfigError("dict_size must be >= 8");
  for (const auto& req : cfg.scenarios) {
    auto it = req.numbers.find("samples");
    if (it != req.numbers.end()) {
      const auto s = static_cast<std::size_t>(it->second);
      if (!is_power_of_two(s) || s < 8)
        throw ConfigError("scenario " + req.name + ": samples must be a power of two >= 8");
    }
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace lpweak
