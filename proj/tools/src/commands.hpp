#ifndef KMSA_TOOLS_COMMANDS_HPP
#define KMSA_TOOLS_COMMANDS_HPP

#include <iosfwd>

namespace kmsa::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigFailure = 1,  // bad flags, invalid configuration, dimension mismatch
  kIoFailure = 2,      // unreadable/unwritable files, malformed files
  kNumericFailure = 3,
};

/// Runs `kmsa <subcommand> ...`. The summary line goes to `out`, messages
/// to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kmsa::cli

#endif  // KMSA_TOOLS_COMMANDS_HPP
