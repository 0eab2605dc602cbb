#pragma once

// Invariant suites run by `kuramoto2c verify`. Each check evaluates one
// property over a fixed grid and reports the worst case it saw.

#include <string>
#include <vector>

namespace kuramoto2c {

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed = false;
  std::string detail;
};

/// bessel, selfcons, bifurcation, disorder, sde, mckean.
const std::vector<std::string>& suite_names();

/// Runs one suite, or every suite for "all". Throws ConfigError for an
/// unknown name. A check that throws is reported as failed.
std::vector<CheckResult> run_suite(const std::string& name, unsigned threads = 1);

}  // namespace kuramoto2c
