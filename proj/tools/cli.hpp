// Command-line front end. run_cli is the whole program minus main(), so tests
// can drive it in-process.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sk::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

inline constexpr const char* kDataDirEnv = "SUSPENSEKIT_DATA_DIR";

/// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sk::cli
