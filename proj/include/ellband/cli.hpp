#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ellband::cli {

inline constexpr const char* kVersion = "0.1.0";

// Parses and executes one command.  Exit codes: 0 success, 1 verification
// failure, 2 usage error, 3 numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace ellband::cli
