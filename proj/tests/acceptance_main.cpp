// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Optional arguments select a subset of criterion ids.

#include <cstdio>
#include <cstdlib>
#include <vector>

#include "ellband/verification.hpp"

int main(int argc, char** argv) {
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));

  const auto results = ellband::run_acceptance(only);
  bool all_ok = true;
  for (const auto& r : results) {
    std::printf("%s criterion %2d [%6.2fs] %s -- %s\n", r.passed ? "PASS" : "FAIL",
                r.id, r.seconds, r.name.c_str(), r.detail.c_str());
    all_ok = all_ok && r.passed;
  }
  std::printf("%s: %zu criteria\n", all_ok ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED",
              results.size());
  return all_ok ? 0 : 1;
}
