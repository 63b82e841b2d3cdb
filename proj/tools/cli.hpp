#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace eonspectra::cli {

// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kInputError = 1;
inline constexpr int kNotConverged = 2;

/// Entry point of the `eonspectra` tool. Diagnostics go to `err`; results
/// go to the --out file, or to `out` when no file is given.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace eonspectra::cli
