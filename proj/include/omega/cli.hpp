#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace omega::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitPipelineError = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command. `args` excludes the program name. Payload goes to
/// `out`, diagnostics to `err`; `in` backs the "-" file argument.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace omega::cli
