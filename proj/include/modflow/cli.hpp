#ifndef MODFLOW_CLI_HPP
#define MODFLOW_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace modflow::cli
{

// Exit codes.
enum Exit : int {
    ok = 0,
    internal = 1,
    usage = 2,       // malformed arguments or values
    domain = 3,      // DomainError, StepUnderflow and other typed failures
    escape = 4,      // DomainEscape
    check_failed = 5,
    io = 6,          // --out could not be written
};

// Runs the command line `args` (without the program name). Output goes to
// `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace modflow::cli

#endif
