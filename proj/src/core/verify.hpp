#pragma once

// Cross-module verification suites behind the `verify` command. Each suite
// exercises one invariant or closed-form relation and reports the worst
// residual it observed.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nlsim {

struct CheckResult {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string note;  // set when a suite aborted with an error
};

// Runs every suite with deterministic per-suite seeding. A tolerance override
// replaces each suite's own tolerance.
std::vector<CheckResult> run_verification(
    std::uint64_t seed, std::optional<double> tolerance_override = {});

}  // namespace nlsim
