#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace clarklab {

/// Outcome of one identity check of a suite.
struct CheckResult {
  std::string id;
  std::string description;
  bool pass = false;
  /// The worst observed statistic and the bound it was compared with.
  double value = 0.0;
  double bound = 0.0;
  double seconds = 0.0;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;

  bool all_pass() const;
};

/// Suites known to run_suite: "core" (every identity check over the
/// built-in corpus) and "quick" (the d = 1 checks only).
std::vector<std::string> suite_names();

/// Throws InvalidArgumentError for an unknown suite name.
SuiteReport run_suite(const std::string& name, std::uint64_t seed = 0);

}  // namespace clarklab
