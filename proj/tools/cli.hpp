#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace optresp::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kIO = 3,
  kBudget = 4,
};

/// Entry point shared by the executable and the tests. args excludes the
/// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// 64-bit FNV-1a over a file's bytes, as 16 hex digits.
std::string file_digest(const std::string& path);

}  // namespace optresp::cli
