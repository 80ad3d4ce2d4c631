#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace shm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitDivergence = 4;

/// Runs one `shm-cnn` invocation; `args` excludes the program name.
/// Normal output goes to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace shm::cli
