#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nnct::cli {

/// Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.
int run(int argc, char** argv);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nnct::cli
