#pragma once

#include <iosfwd>

namespace optocool {

/// Exit codes: 0 ok, 2 config error, 3 unstable system, 4 numerical non-convergence.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace optocool
