#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spintomo::cli {

enum ExitCode : int { kOk = 0, kFlagError = 2, kDataError = 3, kVerificationFailure = 4 };

/// Runs one command; args exclude the program name. Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

std::string tool_version();

}  // namespace spintomo::cli
