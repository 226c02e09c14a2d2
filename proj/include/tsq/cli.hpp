#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tsq::cli {

enum ExitCode : int {
  kOk = 0,
  kInvalidArguments = 2,
  kNoConvergence = 3,
  kMalformedInput = 4,
};

// Runs one command line. args excludes the program name. Results go to
// `out` unless --out redirects them to a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tsq::cli
