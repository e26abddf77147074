#pragma once

#include <stdexcept>
#include <string>

namespace ellband {

// Integration failure, root finding breakdown, complex roots where real ones
// were expected, and similar runtime numerical problems.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

// Two objects that should agree structurally (e.g. band edge counts of
// isospectral partners) do not.
class structural_mismatch : public std::runtime_error {
 public:
  explicit structural_mismatch(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ellband
