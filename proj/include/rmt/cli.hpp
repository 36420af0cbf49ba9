#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rmt {

/// Subcommands: metric-check, solve, lsd, spiked, clt.
/// Exit codes: 0 success, 1 failed criterion or runtime error, 2 usage error.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// args excludes the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rmt
