#pragma once

#include <string>
#include <vector>

namespace varmult::cli {

inline constexpr const char* kToolName = "varmult";
inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int { kOk = 0, kRejected = 1, kUsage = 2, kInconclusive = 3 };

struct Result {
  int exit_code = kOk;
  std::string out;
  std::string err;
};

/// Runs one invocation. `args` excludes the program name.
Result run(const std::vector<std::string>& args);

}  // namespace varmult::cli
