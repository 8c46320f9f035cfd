#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mandala {

enum class VerifyLevel { fast, full };

struct VerifyCheck {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;

  bool all_pass() const {
    for (const auto& c : checks) {
      if (!c.pass) return false;
    }
    return true;
  }
};

/// Runs the invariant suite on internally generated fixed-seed inputs and
/// streams one line per check. `fast` covers the algebraic identities, trace
/// consistency up to n = 16, the clustering oracle up to d = 8, and the
/// round trips; `full` adds the quadrature oracles and an n = 1024 smoke run
/// with timing.
VerifyReport run_verify(VerifyLevel level, std::ostream& log);

}  // namespace mandala
