#include "lpweak/runner.hpp"

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <thread>

#include "json.hpp"

namespace lpweak {

namespace {

const std::vector<std::string> kGridKeys = {"samples", "length", "dim"};

std::vector<std::string> with_grid(std::initializer_list<const char*> keys) {
  std::vector<std::string> out(kGridKeys);
  for (const char* k : keys) out.emplace_back(k);
  return out;
}

}  // namespace

const std::vector<ScenarioInfo>& scenario_registry() {
  static const std::vector<ScenarioInfo> registry = {
      {"partition_of_unity", with_grid({}), &check_partition_of_unity},
      {"reconstruction", with_grid({"count", "tolerance"}), &check_reconstruction},
      {"maximal_chain", with_grid({"count", "components", "p"}), &check_maximal_chain},
      {"weak_norm_exactness", with_grid({"count", "p", "r", "witness_tolerance"}),
       &check_weak_norms},
      {"whitney_cz_tier1", with_grid({"count", "degree", "components"}), &check_whitney_cz},
      {"cz_quantitative",
       with_grid({"degree", "sweep", "stability_factor", "slope_margin", "rank_lo", "rank_hi",
                  "alpha_span_min"}),
       &check_cz_quantitative},
      {"sq_equivalence",
       with_grid({"count", "threshold", "refine_change", "p_low", "p_mid", "p_high"}),
       &check_sq_equivalence},
      {"vector_maximal", with_grid({"count", "components", "p", "q", "p1", "p2", "threshold"}),
       &check_fs_inequality},
      {"nondensity", with_grid({"distance_bound", "profile_band"}), &check_nondensity},
      {"lacunary", with_grid({"count", "q", "p", "threshold"}), &check_lacunary},
      {"decay_trend", with_grid({"p"}), &check_decay_trend},
      {"interpolation", with_grid({"count", "p1", "p", "p2", "threshold"}),
       &check_interpolation},
  };
  return registry;
}

const ScenarioInfo* find_scenario(const std::string& name) {
  for (const auto& info : scenario_registry())
    if (info.name == name) return &info;
  return nullptr;
}

RunOutcome run_scenarios(const RunConfig& config, const std::string& out_dir, int workers) {
  namespace fs = std::filesystem;
  const auto t0 = std::chrono::steady_clock::now();
  fs::create_directories(out_dir);

  RunOutcome outcome;
  outcome.reports.resize(config.scenarios.size());

  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= config.scenarios.size()) return;
      const auto& req = config.scenarios[i];
      const ScenarioInfo* info = find_scenario(req.name);
      ScenarioParams params;
      params.sharpness = config.sharpness;
      params.seed = config.seed;
      params.scale_m = config.scale_m;
      params.dict_size = config.dict_size;
      params.numbers = config.global_grid_overrides;  // low precedence
      for (const auto& [k, v] : req.numbers) params.numbers[k] = v;
      outcome.reports[i] = info->fn(params);
    }
  };

  if (workers <= 1 || config.scenarios.size() <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    const int n = std::min<int>(workers, static_cast<int>(config.scenarios.size()));
    pool.reserve(n);
    for (int i = 0; i < n; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  for (const auto& rep : outcome.reports) {
    rep.write_csv((fs::path(out_dir) / (rep.scenario + ".csv")).string());
    if (!rep.pass) outcome.all_passed = false;
  }

  const auto t1 = std::chrono::steady_clock::now();
  nlohmann::json manifest;
  manifest["version"] = "0.1.0";
  manifest["seed"] = config.seed;
  manifest["wall_time_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
  manifest["timestamp"] =
      std::chrono::duration_cast<std::chrono::seconds>(
          std::chrono::system_clock::now().time_since_epoch())
          .count();
  manifest["all_passed"] = outcome.all_passed;
  manifest["scenarios"] = nlohmann::json::array();
  for (const auto& rep : outcome.reports) {
    nlohmann::json s;
    s["name"] = rep.scenario;
    s["pass"] = rep.pass;
    s["params"] = rep.params;
    s["constants"] = rep.constants;
    s["failures"] = rep.failures;
    manifest["scenarios"].push_back(std::move(s));
  }
  std::ofstream mf(fs::path(out_dir) / "manifest.json", std::ios::binary);
  if (!mf) throw std::runtime_error("cannot write manifest in " + out_dir);
  mf << manifest.dump(2) << '\n';
  return outcome;
}

}  // namespace lpweak
