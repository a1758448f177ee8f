#pragma once

// Seeded invariant batteries, runnable from the CLI and reused by tests.
// Each check reports the measured residual against its tolerance.

#include <cstdint>
#include <string>
#include <vector>

namespace qsl {

struct ValidateCheck {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct ValidateSummary {
  std::string suite;
  std::vector<ValidateCheck> checks;
  bool all_pass() const {
    for (const ValidateCheck& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

/// Suites: "qspeed", "gauge", "conservation", "momentum", "parallel",
/// "bounds-chain", "euler-arnold", "states". "all" runs every suite.
std::vector<ValidateSummary> run_validation(const std::string& selector,
                                            std::uint64_t seed);

}  // namespace qsl
