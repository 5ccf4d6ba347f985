// Acceptance suite: runs every verification criterion at its declared
// tolerance and prints one pass/fail line per criterion. Exit status is
// nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "lpweak/verify.hpp"

using namespace lpweak;

namespace {

struct Criterion {
  int id;
  std::string label;
  bool pass;
  double seconds;
  std::vector<std::string> notes;
};

std::vector<Criterion> results;

template <typename Fn>
VerifyReport timed(int id, const std::string& label, double time_limit, Fn&& fn,
                   const ScenarioParams& params) {
  const auto t0 = std::chrono::steady_clock::now();
  VerifyReport rep = fn(params);
  const auto t1 = std::chrono::steady_clock::now();
  const double secs = std::chrono::duration<double>(t1 - t0).count();
  Criterion c{id, label, rep.pass, secs, rep.failures};
  if (time_limit > 0.0 && secs > time_limit) {
    c.pass = false;
    c.notes.push_back("runtime " + std::to_string(secs) + "s over " +
                      std::to_string(time_limit) + "s");
  }
  results.push_back(c);
  return rep;
}

}  // namespace

int main() {
  ScenarioParams base;

  // 1. dyadic partition of unity, positivity, support  (< 1 s at S = 2^12)
  {
    ScenarioParams p = base;
    p.numbers = {{"samples", 4096}};
    timed(1, "partition of unity / positivity / support", 1.0,
          check_partition_of_unity, p);
  }
  // 2. reconstruction of band-limited mean-zero fields
  {
    ScenarioParams p = base;
    p.numbers = {{"count", 20}, {"tolerance", 1e-8}};
    timed(2, "band reconstruction within 1e-8", 0.0, check_reconstruction, p);
  }
  // 3. pointwise maximal chain, zero violations
  {
    ScenarioParams p = base;
    p.numbers = {{"count", 20}};
    timed(3, "maximal chain with zero pointwise violations", 0.0, check_maximal_chain, p);
  }
  // 4. weak-norm exactness and witnesses at S = 2^14, L = 64
  {
    ScenarioParams p = base;
    p.numbers = {{"samples", 16384}, {"length", 64}, {"count", 50},
                 {"witness_tolerance", 0.02}};
    timed(4, "weak-norm exactness and 2% witnesses", 0.0, check_weak_norms, p);
  }
  // 5. whitney geometry, partition, reconstruction, moments  (< 60 s at 2^10)
  {
    ScenarioParams p = base;
    p.numbers = {{"samples", 1024}, {"count", 10}};
    timed(5, "whitney/cz exact identities on 10 open sets", 60.0, check_whitney_cz, p);
  }
  // 6. quantitative cz: stable good bound, bad-part decay slope
  {
    ScenarioParams p = base;
    timed(6, "cz good-part stability and bad-part decay", 0.0, check_cz_quantitative, p);
  }
  // 7. square function two-sided band at p in {0.7, 1, 1.5}
  {
    ScenarioParams p = base;
    p.numbers = {{"count", 50}, {"threshold", 50}, {"refine_change", 0.10}};
    timed(7, "square function two-sided band <= 50", 0.0, check_sq_equivalence, p);
  }
  // 8. vector maximal weak-type ratio and layer-cake split
  {
    ScenarioParams p = base;
    p.numbers = {{"count", 30}, {"components", 8}, {"p", 2}, {"q", 2}, {"threshold", 20}};
    timed(8, "vector maximal ratio <= 20 with layer-cake split", 0.0,
          check_fs_inequality, p);
  }
  // 9. non-density distance bound at S = 2^14  (< 120 s)
  {
    ScenarioParams p = base;
    p.numbers = {{"samples", 16384}, {"length", 64}, {"distance_bound", 0.04}};
    timed(9, "non-density distance infimum >= 0.04", 120.0, check_nondensity, p);
  }
  // 10. lacunary consistency and lower ratio
  {
    ScenarioParams p = base;
    p.numbers = {{"count", 50}, {"q", 2}, {"p", 1}, {"threshold", 100}};
    timed(10, "lacunary consistency 1e-12 and ratio <= 100", 0.0, check_lacunary, p);
  }
  // 11. exceptional-set decay trends for the staircase witnesses
  {
    ScenarioParams p = base;
    timed(11, "exceptional-set ratios strictly decreasing", 0.0, check_decay_trend, p);
  }

  bool all = true;
  for (const auto& c : results) {
    std::printf("[%s] criterion %2d: %s (%.2fs)\n", c.pass ? "PASS" : "FAIL", c.id,
                c.label.c_str(), c.seconds);
    for (const auto& n : c.notes) std::printf("        %s\n", n.c_str());
    all = all && c.pass;
  }
  std::printf("%s\n", all ? "ALL CRITERIA PASSED" : "CRITERIA FAILED");
  return all ? 0 : 1;
}
