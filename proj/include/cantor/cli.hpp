#pragma once

#include <iosfwd>

#include "cantor/error.hpp"

namespace cantor::cli {

// 0 success, 1 I/O failure, 2 invalid input, 3 insufficient depth,
// 4 internal assertion.
int exit_code(ErrorKind kind);

// Runs one command line (argv[0] is the program name). Normal output goes to
// `out` unless redirected with --out; diagnostics go to `err`. Relative
// output paths are resolved against $CANTOR_OUT_DIR when it is set.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cantor::cli
