#pragma once

#include <string>
#include <vector>

#include "qfb/config.hpp"

namespace qfb {

struct CheckItem {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double limit = 0.0;
  std::string detail;
};

/// Invariant suite on the configured system: norm and energy conservation,
/// skew-Hermiticity, weight completeness, dark-state stationarity, dimer
/// mapping and the n·R̄ = 1/(2π) product law for n = 1..n_max.
std::vector<CheckItem> run_selfcheck(const RunConfig& cfg);

}  // namespace qfb
