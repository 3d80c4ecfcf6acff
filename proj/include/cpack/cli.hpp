#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cpack::cli {

// Exit codes: 0 ok, 1 verification failure, 2 input error.
inline constexpr int kOk = 0;
inline constexpr int kVerificationFailure = 1;
inline constexpr int kInputError = 2;

/// Runs one CLI invocation (args without the program name). All output
/// goes to the given streams, so tests can drive commands in-process.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace cpack::cli
