#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mmc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `mmc` tool. `args` excludes the program name.
/// Data goes to `out` (or files), diagnostics and logs to `err`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace mmc::cli
