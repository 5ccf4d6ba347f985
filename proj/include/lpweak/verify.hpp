#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lpweak/grid.hpp"

namespace lpweak {

// Numeric environment of one verification scenario. Scenario-specific keys
// live in `numbers`; every scenario has its own grid defaults and honors
// "samples" / "length" / "dim" overrides.
struct ScenarioParams {
  double sharpness = 1.0;
  std::uint64_t seed = 12345;
  int scale_m = 4;
  std::size_t dict_size = 12;
  std::map<std::string, double> numbers;

  double get(const std::string& key, double fallback) const;
  Grid grid(std::size_t default_samples, double default_length, int default_dim = 1) const;
};

// Structured outcome of one scenario: echoed parameters, a per-instance
// table, empirical constants, and a pass flag against declared thresholds.
struct VerifyReport {
  std::string scenario;
  std::map<std::string, double> params;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::map<std::string, double> constants;
  bool pass = true;
  std::vector<std::string> failures;

  void require(bool ok, const std::string& what);
  std::string csv_body() const;
  void write_csv(const std::string& path) const;
};

VerifyReport check_partition_of_unity(const ScenarioParams& p);
VerifyReport check_reconstruction(const ScenarioParams& p);
VerifyReport check_maximal_chain(const ScenarioParams& p);
VerifyReport check_weak_norms(const ScenarioParams& p);
VerifyReport check_whitney_cz(const ScenarioParams& p);
VerifyReport check_cz_quantitative(const ScenarioParams& p);
VerifyReport check_sq_equivalence(const ScenarioParams& p);
VerifyReport check_fs_inequality(const ScenarioParams& p);
VerifyReport check_nondensity(const ScenarioParams& p);
VerifyReport check_lacunary(const ScenarioParams& p);
VerifyReport check_decay_trend(const ScenarioParams& p);
VerifyReport check_interpolation(const ScenarioParams& p);

}  // namespace lpweak
