#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qsieve::cli {

enum ExitCode : int {
    exit_ok = 0,           // pass / colorable
    exit_violation = 1,    // an axiom failed
    exit_input = 2,        // parse or validation failure
    exit_uncolorable = 3,
};

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace qsieve::cli
