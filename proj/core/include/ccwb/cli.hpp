#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ccwb {

// Full ccwb command line, minus argv[0].  Writes reports to out and
// diagnostics to err; returns the process exit status (0 success,
// 1 domain error, 2 usage error).  The binary in tools/ is a thin
// wrapper; tests drive this directly.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

// Percentage formatting used by the reports: one decimal place, ties
// to even, "-0.0" normalized to "0.0".
std::string format_pct(double pct);

}  // namespace ccwb
