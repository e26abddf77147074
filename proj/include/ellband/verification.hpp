#pragma once

#include <string>
#include <vector>

namespace ellband {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

// Runs the acceptance criteria (all of them, or the listed subset) and
// returns one result per criterion.  Nothing is printed here; callers format
// the pass/fail lines.
std::vector<CriterionResult> run_acceptance(const std::vector<int>& only = {});

}  // namespace ellband
