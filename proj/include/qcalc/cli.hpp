#pragma once

// Command-line front-end. Input and output are JSON documents; see
// docs/cli-schema.md for the per-command fields.

#include <iosfwd>
#include <string>
#include <vector>

namespace qcalc::cli {

enum ExitCode : int {
    kOk = 0,
    kParseError = 1,  ///< malformed arguments or document, invalid argument
    kDomainError = 2, ///< domain, geometry, contract or singular-element errors
    kAccuracyError = 3,
};

/// args excludes the program name. `in` is read when no --input is given,
/// `out` receives the result document unless --output is given, `err` the
/// diagnostics for failures.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

/// Convenience wrapper over std::cin / std::cout / std::cerr.
int run(int argc, char** argv);

}  // namespace qcalc::cli
