#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace nbp {

struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;      // measured statistic (max error, TV distance, ...)
  double threshold = 0.0;  // the bound it is held to
  std::string detail;
};

struct SelfCheckReport {
  std::vector<CheckResult> checks;
  bool all_pass = false;
  std::int64_t draws = 0;
  std::uint64_t seed = 0;
};

/// the identity/frequency suite behind `nbp dist-check`: the bivariate PMF
/// factorization identities, CRT/Stirling normalization, and empirical
/// sampler frequencies against the closed-form PMFs
SelfCheckReport run_dist_check(std::int64_t draws = 100000,
                               std::uint64_t seed = 1);

std::string selfcheck_to_json(const SelfCheckReport& report);

}  // namespace nbp
