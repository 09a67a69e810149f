#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace alpha3d {

/// Runs the command line; `args` excludes the program name. Returns the exit status.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace alpha3d
