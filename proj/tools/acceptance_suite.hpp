#pragma once

#include <cstdint>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "hqoc/circuit.hpp"

namespace hqoc::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

constexpr int kCriterionCount = 12;

// Runs the selected criteria (all when `ids` is empty), printing one PASS/FAIL line each to `out`.
std::vector<CriterionResult> run(const std::vector<int>& ids, std::ostream& out);

// m = 1, r = 1, 1..max_gates gates, |t| <= max_strength, squeeze factors in [1/2, 2].
Circuit random_circuit(std::mt19937_64& rng, int max_gates, double max_strength);

}  // namespace hqoc::acceptance
