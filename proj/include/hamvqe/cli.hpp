#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hamvqe {

inline constexpr const char *kVersion = "1.0.0";

/// Runs the command line front end and returns the process exit status:
/// 0 on success, 2 on usage errors, 1 on numerical failure.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace hamvqe
