#pragma once

#include <span>
#include <string>
#include <vector>

#include "epsim/types.hpp"

namespace epsim::harness {

struct CheckResult {
  std::string name;
  bool passed = false;
  double observed = 0.0;   // worst deviation seen
  double tolerance = 0.0;
  std::string detail;
};

/// Names of the invariant checks in execution order.
std::vector<std::string> check_names();

/// Runs every check whose name contains `filter` (all when empty).
std::vector<CheckResult> run_checks(const std::string& filter);

/// CPTP check over raw Kraus lists; fails if any Σ K†K deviates from I by more than 1e-12.
CheckResult check_kraus_lists(const std::string& name, std::span<const std::vector<Matrix>> channels);

/// One formatted line per result.
std::string format_report(const std::vector<CheckResult>& results);

}  // namespace epsim::harness
