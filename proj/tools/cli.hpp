#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rydtweezer::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 1,
  kNumericalFailure = 2,
  kSelftestFailure = 3,
};

/// Entry point shared by the executable and the tests.
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Top-level --help text, including the table of configuration keys.
std::string help_text();

}  // namespace rydtweezer::cli
