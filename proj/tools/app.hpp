#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tcut::app {

inline constexpr const char* kToolName = "tcut";
inline constexpr const char* kVersion = "0.1.0";

/// Exit codes.
enum ExitCode : int { kOk = 0, kUsage = 1, kNotHurwitz = 2, kNumerical = 3 };

/// Runs the command line `args` (program name excluded). The report goes to
/// `out` unless --report names a file; errors are one line on `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tcut::app
