#pragma once

// optred2bp front end, split from main() so the tests can drive it in-process.

#include <iosfwd>

namespace optred::cli {

enum ExitCode : int { kOk = 0, kVerificationFailure = 1, kBadInput = 2, kNumericalFailure = 3 };

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace optred::cli
