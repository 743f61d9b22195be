#pragma once

#include <ostream>

namespace provio {

// Runs one `provio` subcommand. Returns 0 on success, 2 on a usage error
// (message and hint on `err`), 1 on a runtime error (one line on `err`).
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace provio
