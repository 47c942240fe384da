#pragma once

#include <iosfwd>

namespace irm {

// Full command-line front end (subcommands: solve, bench, stability), callable
// in-process so tests can drive it without spawning. Returns the process exit
// code: 0 converged, 2 max-iterations, 1 solver/runtime error, 64 usage error,
// 66 file error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace irm
