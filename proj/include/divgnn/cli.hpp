#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace divgnn::cli {

// Runs the command-line tool on `args` (program name excluded). Returns the
// process exit code: 0 success, 1 usage, 2 data, 3 numeric.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace divgnn::cli
