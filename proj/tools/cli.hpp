#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace percolab::cli {

// Runs the percolab command line on `args` (without the program name).
// Returns the process exit code: 0 success, 1 failed checks or runtime error,
// 2 usage or configuration error.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace percolab::cli
