#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace staypoint::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInvalidInput = 2;

/// Runs one command. `args` excludes the program name. Returns 0 on success
/// and 2 for invalid flags or input (missing files, parse errors).
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

} // namespace staypoint::cli
