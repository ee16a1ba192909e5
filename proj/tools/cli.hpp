#pragma once

#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace relugame::cli {

enum ExitCode : int {
  kSuccess = 0,
  kVerificationFailed = 1,
  kUsageError = 2,
};

/// Runs one invocation; `args` excludes the program name.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

/// Library operation -> the single subcommand that exposes it.
struct OperationRoute {
  std::string_view operation;
  std::string_view subcommand;  // space-separated path, e.g. "paths enumerate"
};

std::span<const OperationRoute> operation_routes();

/// Every subcommand path registered with the parser.
std::vector<std::string> registered_subcommands();

}  // namespace relugame::cli
