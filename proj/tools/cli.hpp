#pragma once

#include <ostream>

namespace fstsp::cli {

enum ExitCode { kOk = 0, kUsage = 2, kIo = 3, kValidation = 4 };

/// Runs one command line; everything goes to `out` and `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fstsp::cli
