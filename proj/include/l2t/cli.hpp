#pragma once

#include <iosfwd>

namespace l2t {

// Entry point of the l2t command-line tool. Returns the process exit code:
// 0 success, 2 bad configuration or malformed input, 1 runtime failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace l2t
