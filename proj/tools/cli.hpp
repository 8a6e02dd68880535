#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace greenrelay::cli {

enum Exit : int {
  kOk = 0,
  kFailure = 1, // a run or check failed; the message names what
  kUsage = 2,   // bad flags, unreadable config, invalid values
};

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace greenrelay::cli
