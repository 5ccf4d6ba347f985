#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace lpweak {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ScenarioRequest {
  std::string name;
  std::map<std::string, double> numbers;
};

// Flat key-value configuration with one [global] section and one
// [scenario <name>] section per requested scenario. Unknown sections or keys
// are rejected.
struct RunConfig {
  // global numeric environment; grid keys are forwarded to scenarios only
  // when explicitly present in the file
  double length = 16.0;
  std::size_t samples = 4096;
  int dim = 1;
  double sharpness = 1.0;
  std::uint64_t seed = 12345;
  int scale_m = 4;
  std::size_t dict_size = 12;
  std::map<std::string, double> global_grid_overrides;  // samples/length/dim if set

  std::vector<ScenarioRequest> scenarios;
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

}  // namespace lpweak
