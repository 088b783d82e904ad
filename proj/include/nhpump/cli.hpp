#pragma once

#include <ostream>

namespace nhpump::cli {

enum ExitCode : int { ok = 0, usage_error = 2, domain_error = 3 };

/// Entry point of the `nhpump` tool. argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nhpump::cli
