#pragma once

// The `bookie` command line: loss, regret-table, simulate, verify, serve.

#include <iosfwd>
#include <string>
#include <vector>

namespace bookie {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerifyFailed = 1,
  kExitUsage = 2,
  kExitNumeric = 3,
  kExitIo = 4,
};

/// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "3", "2..5", "1,10,100" or "1e6"; throws InvalidArgument.
std::vector<int> parse_int_list(const std::string& text);

/// Inline JSON array or "@path" to a file holding one.
std::vector<double> parse_state(const std::string& text);

}  // namespace bookie
