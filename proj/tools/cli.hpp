#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace gsos::cli {

// Exit codes.
constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

// Runs the command line `args` (without the program name).
int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

constexpr int kFormatVersion = 1;

}  // namespace gsos::cli
