#include "bethe/cli.hpp"

#include <ostream>

namespace bethe {

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    (void)args;
    (void)out;
    err << "command line interface not wired up yet\n";
    return 2;
}

} // namespace bethe
