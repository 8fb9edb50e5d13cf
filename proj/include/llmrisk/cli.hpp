#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace llmrisk::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;  // validation or evaluation error
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;

// Runs one invocation. `args` excludes the program name. `color` enables ANSI
// severity highlighting in human-readable output (still subject to --no-color).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, bool color = false);

}  // namespace llmrisk::cli
