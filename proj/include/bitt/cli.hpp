#pragma once

#include <iosfwd>

namespace bitt::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,     // type error, negative verdict or property violation
  kInputError = 2,  // bad arguments, unreadable file, parse error
  kOutOfFuel = 3,
};

/// Entry point of the `bitt` tool. Reports go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bitt::cli
