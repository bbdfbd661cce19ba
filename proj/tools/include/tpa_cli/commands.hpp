#pragma once

#include <iosfwd>
#include <string>

#include "tpa/antivoter.hpp"

namespace tpa {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitUsage = 2,
};

/// Entry point of `tpa`; writes reports to out and diagnostics to err.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// "K<n>", "petersen", or a path to an edge-list file.
Graph resolve_graph(const std::string& source);

/// Exact-stationary vertex limit, overridable through STEIN_TPA_EXACT_LIMIT.
long exact_vertex_limit();

}  // namespace tpa
