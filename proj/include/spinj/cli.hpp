#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spinj {

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kUsage = 2;
inline constexpr int kComputation = 3;
}  // namespace exit_code

/// Entry point of the `spinj` tool. `args` excludes the program name.
/// Results go to `out` (or the --out file), diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spinj
