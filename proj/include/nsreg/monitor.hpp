#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nsreg/bounds.hpp"
#include "nsreg/ns_solver.hpp"

namespace nsreg {

struct Violation {
  double t;
  double observed;
  double allowed;
};

/// Outcome of one inequality checked sample by sample.
struct CheckResult {
  std::string name;
  /// max_i (observed_i - allowed_i); negative values are margins.
  double max_violation = 0.0;
  double tolerance = 0.0;
  std::vector<Violation> violations;
  /// Solver diagnostics fail with exit code 3, estimate checks with 2.
  bool solver_diagnostic = false;

  bool passed() const noexcept { return violations.empty(); }
  std::optional<double> first_violation_t() const;
};

struct MonitorTolerances {
  /// Slack on the enstrophy inequality, relative to max c6 y^3 along the trace.
  double h1_relative = 1e-3;
  /// Slack on the energy inequality, relative to its right-hand side.
  double energy_relative = 1e-8;
  /// Slack on bound dominance, relative to the bound.
  double dominance_relative = 1e-6;
  /// Energy-balance residual relative to max nu ||u||_1^2.
  double balance_relative = 1e-3;
};

struct MonitorReport {
  std::vector<CheckResult> checks;

  bool passed() const;
  /// 0 pass, 3 when a solver diagnostic fails, 2 for any other violation.
  int exit_code() const;
  /// Name of the check whose first violation happens earliest, if any.
  std::optional<std::string> first_failure() const;
  nlohmann::json to_json() const;
};

/// d/dt y - c3 ||f||^2 - c6 y^3 per sample; the enstrophy estimate predicts <= 0.
std::vector<double> check_h1_inequality(const NormTrace& trace, const ConstantLedger& ledger);
CheckResult evaluate_h1_inequality(const NormTrace& trace, const ConstantLedger& ledger,
                                   double relative_tolerance = 1e-3);

/// ||u(t)||^2 + (nu/2) int_0^t y <= 2 c7 int_0^t ||f||^2 + ||u0||^2 at every sample.
CheckResult check_energy_inequality(const NormTrace& trace, const ConstantLedger& ledger,
                                    double relative_tolerance = 1e-8);

/// Energy-balance residual of the solver against max(relative_tolerance, (r dt)^2) times
/// max(nu ||u||_1^2, |(f, u)|), where r = max 2 nu ||Au||^2 / ||u||_1^2 and dt is the
/// largest sample spacing.
CheckResult check_energy_balance(const NormTrace& trace, double nu, double relative_tolerance = 1e-3);

/// y(t_i) <= bound(t_i) (1 + tol) for every sample inside the bound's horizon.
/// Throws UsageError unless the report certifies a bound.
MonitorReport check_bound_dominance(const NormTrace& trace, const CriterionReport& report,
                                    double relative_tolerance = 1e-6);

/// Every check above on one trace. Dominance is included when `report` certifies.
MonitorReport run_monitor(const NormTrace& trace, const ConstantLedger& ledger,
                          const CriterionReport& report, const MonitorTolerances& tolerances = {});

}  // namespace nsreg
