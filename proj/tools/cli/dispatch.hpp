#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mollified::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;  // ran, but a verification failed (or the run itself failed)
inline constexpr int kExitUsage = 2;

/// Parses argv (argv[0] is the program name) and runs one subcommand.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Same, with the arguments after the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mollified::cli
