#pragma once

#include <functional>
#include <string>
#include <vector>

namespace oqe::acceptance {

struct CriterionResult {
  int id{0};
  std::string name;
  bool pass{false};
  /// measured quantities, deterministic
  std::string detail;
  double seconds{0};
};

/// Runs the listed criteria (all when empty), in order. `progress` is called after each one.
std::vector<CriterionResult> run_acceptance(const std::vector<int>& only = {},
                                            const std::function<void(const CriterionResult&)>& progress = {});

/// Number of criteria.
inline constexpr int kCriteria = 11;

}  // namespace oqe::acceptance
