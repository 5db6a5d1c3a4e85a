#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bethe {

// Entry point shared by the binary and the tests. Returns the process exit
// code: 0 all checks passed, 1 a check failed, 2 usage or config error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace bethe
