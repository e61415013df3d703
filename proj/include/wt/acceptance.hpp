#pragma once

#include <string>
#include <vector>

namespace wt {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

// Runs the full acceptance battery (criteria 1..11) at the pinned
// tolerances.  workers bounds the thread count of the Monte-Carlo pieces.
std::vector<CriterionResult> run_acceptance(int workers);

// Individual criteria, 1-based ids.
CriterionResult run_criterion(int id, int workers);

} // namespace wt
