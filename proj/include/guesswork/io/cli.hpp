#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "guesswork/error.hpp"

namespace guesswork::io {

enum ExitCode : int { kExitOk = 0, kExitInternal = 1, kExitValidation = 2, kExitNumerical = 3, kExitSizeCap = 4 };

int exit_code(ErrorKind kind);

/// Runs one subcommand; `args` excludes the program name.
/// Subcommands: solve, dual, bound, entropic, certify-key, strategy, sweep, export-misdp, gen.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace guesswork::io
