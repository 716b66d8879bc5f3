#pragma once

// The acceptance suite: twelve numerical checks with fixed tolerances, shared
// by the acceptance test binary and `riesz validate`.

#include <string>
#include <vector>

namespace riesz {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;  // measured quantities against their tolerances
  double seconds = 0.0;
};

struct AcceptanceOptions {
  std::vector<int> only;  // empty runs all criteria
  int threads = 0;
};

int acceptance_criterion_count();
CriterionResult run_criterion(int id, const AcceptanceOptions& opts = {});
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts = {});

}  // namespace riesz
