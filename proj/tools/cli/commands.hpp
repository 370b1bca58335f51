#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lanedit::cli {

enum ExitCode : int {
  kOk = 0,
  kNonMember = 1,  // also: --verify found a mismatch
  kUsage = 2,
  kEmptyLanguage = 3,
  kInputError = 4,  // unreadable file, malformed grammar or matrix, unknown symbol
};

/// Runs the lanedit command line. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lanedit::cli
