#pragma once

#include <string>
#include <vector>

#include "lpweak/config.hpp"
#include "lpweak/verify.hpp"

namespace lpweak {

struct ScenarioInfo {
  std::string name;
  std::vector<std::string> allowed_keys;
  VerifyReport (*fn)(const ScenarioParams&);
};

const std::vector<ScenarioInfo>& scenario_registry();
const ScenarioInfo* find_scenario(const std::string& name);

struct RunOutcome {
  bool all_passed = true;
  std::vector<VerifyReport> reports;
};

// Runs the requested scenarios (scenario-level parallelism), writes one CSV
// per scenario plus manifest.json into out_dir, and returns the reports in
// request order.
RunOutcome run_scenarios(const RunConfig& config, const std::string& out_dir, int workers);

}  // namespace lpweak
