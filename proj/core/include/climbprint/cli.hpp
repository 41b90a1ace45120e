#pragma once

namespace climbprint {

// Command-line pipeline entry point (subcommands: check, plan, run, report).
// Returns the process exit code: 0 success, 1 validation failure (bad
// arguments, unparseable or infeasible design), 2 runtime error (execution,
// simulation or file IO). All diagnostics go to standard error.
int run_cli(int argc, const char* const* argv);

}  // namespace climbprint
