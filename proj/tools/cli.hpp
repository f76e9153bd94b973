#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wlsapprox::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kConfigError = 2,
  kParameterError = 3,
  kAcceptanceFailure = 4,
  kTruncationExceeded = 5,
};

/// Runs one subcommand. `args` excludes the program name. The one-line
/// summary goes to `out`; failures print a JSON error object to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace wlsapprox::cli
