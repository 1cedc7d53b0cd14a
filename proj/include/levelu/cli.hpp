#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace levelu::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;     // bad flags, unreadable or malformed input
inline constexpr int exit_numeric = 2;   // pivot failure
inline constexpr int exit_schedule = 3;  // read-write hazard or broken superset ordering

/// Entry point of the `levelu` tool. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace levelu::cli
