#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cryst {

enum ExitCode : int { kExitPass = 0, kExitCheckFailed = 1, kExitConfig = 2, kExitResource = 3 };

/// Runs one `crystal` subcommand. args excludes the program name. The JSON
/// report goes to --out when given, else to out.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cryst
