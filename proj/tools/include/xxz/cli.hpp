#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace xxz::cli {

enum ExitCode { ok = 0, validation_error = 2, numerical_failure = 3 };

// Parses argv, runs one subcommand and writes the report to `out` (or the
// --out file). Errors go to `err` as a one-line JSON record.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

} // namespace xxz::cli
