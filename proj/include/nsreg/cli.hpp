#pragma once

namespace nsreg {

/// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 2;
inline constexpr int kExitSolverDiagnostic = 3;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitInconsistentData = 65;

/// Subcommands simulate, bounds, compare, calibrate and monitor.
int run_cli(int argc, char** argv);

}  // namespace nsreg
