#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace diffspec::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitClaimsFailed = 1;

// Runs one command line (args exclude the program name). Reports go to `out`
// unless --output names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace diffspec::cli
