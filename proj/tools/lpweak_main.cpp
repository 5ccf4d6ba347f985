#include <cstdio>
#include <cstdlib>
#include <string>

#include "CLI11.hpp"
#include "lpweak/config.hpp"
#include "lpweak/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"lpweak: batch verification scenarios for the dyadic-analysis toolkit"};

  std::string config_path;
  std::string out_dir;
  int workers = 1;
  bool list_scenarios = false;
  std::uint64_t seed_override = 0;
  bool seed_set = false;

  app.add_option("--config", config_path, "scenario configuration file");
  app.add_option("--out", out_dir, "output directory (fallback: $LPWEAK_OUT, then ./lpweak_out)");
  app.add_option("--workers", workers, "scenario-level worker threads")->check(CLI::Range(1, 64));
  app.add_flag("--list-scenarios", list_scenarios, "list scenario names and exit");
  app.add_option("--seed", seed_override, "override the configured seed")
      ->each([&](const std::string&) { seed_set = true; });

  CLI11_PARSE(app, argc, argv);

  if (list_scenarios) {
    for (const auto& info : lpweak::scenario_registry()) std::puts(info.name.c_str());
    return 0;
  }

  if (out_dir.empty()) {
    const char* env = std::getenv("LPWEAK_OUT");
    out_dir = env != nullptr ? env : "lpweak_out";
  }

  lpweak::RunConfig config;
  if (!config_path.empty()) {
    try {
      config = lpweak::parse_config_file(config_path);
    } catch (const lpweak::ConfigError& e) {
      std::fprintf(stderr, "config error: %s\n", e.what());
      return 2;
    }
  }
  if (seed_set) config.seed = seed_override;

  try {
    const auto outcome = lpweak::run_scenarios(config, out_dir, workers);
    for (const auto& rep : outcome.reports) {
      std::printf("[%s] %s\n", rep.pass ? "PASS" : "FAIL", rep.scenario.c_str());
      for (const auto& f : rep.failures) std::printf("       %s\n", f.c_str());
    }
    return outcome.all_passed ? 0 : 1;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid parameters: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "i/o or runtime failure: %s\n", e.what());
    return 3;
  }
}
