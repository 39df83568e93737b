#pragma once

#include <iosfwd>

namespace pgtool {

// Runs one command line.  Exit codes: 0 every verdict passed, 1 a verdict failed, 2 bad input or
// usage.  Reports go to `out`, diagnostics and usage to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pgtool
