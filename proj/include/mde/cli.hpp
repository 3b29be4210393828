#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mde::cli {

/// Exit codes of `mdelab`.
enum Exit : int {
  kPass = 0,
  kAssertionFailed = 1,
  kUsageOrConfig = 2,
  kOutsideMesh = 3,
};

/// Runs one `mdelab` invocation. `args` excludes the program name. Human
/// readable output goes to `out`, diagnostics and witnesses to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mde::cli
