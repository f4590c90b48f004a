#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace impactfield {

/// Runs the command line `args` (without the program name) and returns the exit status.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace impactfield
