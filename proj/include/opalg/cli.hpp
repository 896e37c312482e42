#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace opalg::cli {

/// Exit codes: 0 every check passed, 1 some check failed, 2 usage or input
/// error. `args` excludes the program name. Output is deterministic.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace opalg::cli
