#pragma once

// Command-line front end. Exit codes: 0 success, 1 usage or input error,
// 2 no result (no family found, missing family, too few usable points,
// failed verification).

#include <ostream>
#include <string>
#include <vector>

namespace ptep::cli {

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ptep::cli
