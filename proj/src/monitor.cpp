#include "nsreg/monitor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nsreg/errors.hpp"

namespace nsreg {
namespace {

void require_samples(const NormTrace& trace, std::size_t n) {
  if (trace.size() < n) throw ShapeError("trace has too few samples for this check");
}

// Folds one sample into a check: records the excess and, when positive, a violation.
void account(CheckResult& check, double t, double observed, double allowed) {
  const double excess = observed - allowed;
  check.max_violation = std::max(check.max_violation, excess);
  if (excess > 0.0 || std::isnan(excess)) check.violations.push_back({t, observed, allowed});
}

CheckResult empty_check(std::string name, double tolerance) {
  CheckResult c;
  c.name = std::move(name);
  c.max_violation = -std::numeric_limits<double>::infinity();
  c.tolerance = tolerance;
  return c;
}

}  // namespace

std::optional<double> CheckResult::first_violation_t() const {
  if (violations.empty()) return std::nullopt;
  return violations.front().t;
}

std::vector<double> check_h1_inequality(const NormTrace& trace, const ConstantLedger& ledger) {
  require_samples(trace, 2);
  std::vector<double> t, y;
  for (const auto& s : trace.samples()) {
    t.push_back(s.t);
    y.push_back(s.h1_sq);
  }
  const auto dy = differentiate(t, y);
  std::vector<double> r(t.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] = dy[i] - ledger.c3 * trace.samples()[i].f_sq - ledger.c6 * y[i] * y[i] * y[i];
  }
  return r;
}

CheckResult evaluate_h1_inequality(const NormTrace& trace, const ConstantLedger& ledger,
                                   double relative_tolerance) {
  const auto r = check_h1_inequality(trace, ledger);
  double scale = 0.0;
  for (const auto& s : trace.samples()) scale = std::max(scale, ledger.c6 * std::pow(s.h1_sq, 3));
  auto check = empty_check("h1_inequality", relative_tolerance * scale);
  for (std::size_t i = 0; i < r.size(); ++i) account(check, trace.samples()[i].t, r[i], check.tolerance);
  return check;
}

CheckResult check_energy_inequality(const NormTrace& trace, const ConstantLedger& ledger,
                                    double relative_tolerance) {
  require_samples(trace, 1);
  auto check = empty_check("energy_inequality", relative_tolerance);
  const double e0 = trace.front().l2_sq;
  for (const auto& s : trace.samples()) {
    const double lhs = s.l2_sq + 0.5 * ledger.nu * s.int_h1_sq;
    const double rhs = 2.0 * ledger.c7 * s.int_f_sq + e0;
    account(check, s.t, lhs, rhs * (1.0 + relative_tolerance));
  }
  return check;
}

CheckResult check_energy_balance(const NormTrace& trace, double nu, double relative_tolerance) {
  auto check = empty_check("energy_balance", 0.0);
  check.solver_diagnostic = true;
  if (trace.size() < 3) return check;
  const auto r = energy_balance_residual(trace, nu);
  double scale = 0.0;
  double stiffness = 0.0;
  for (const auto& s : trace.samples()) {
    scale = std::max({scale, nu * s.h1_sq, std::abs(s.f_dot_u)});
    if (s.h1_sq > 0.0) stiffness = std::max(stiffness, 2.0 * nu * s.h2_sq / s.h1_sq);
  }
  double dt = 0.0;
  for (std::size_t i = 1; i < trace.size(); ++i) {
    dt = std::max(dt, trace.samples()[i].t - trace.samples()[i - 1].t);
  }
  // Allowance for differencing the sampled energy: (fastest decay rate * dt)^2.
  const double resolution = (stiffness * dt) * (stiffness * dt);
  check.tolerance = std::max(relative_tolerance, resolution) * scale;
  for (std::size_t i = 0; i < r.size(); ++i) {
    account(check, trace.samples()[i].t, std::abs(r[i]), check.tolerance);
  }
  return check;
}

MonitorReport check_bound_dominance(const NormTrace& trace, const CriterionReport& report,
                                    double relative_tolerance) {
  if (!report.satisfied || !report.bound) {
    throw UsageError("bound dominance needs a criterion that certified a bound");
  }
  auto check = empty_check(std::string("bound_dominance:") + to_string(report.bound->kind()),
                           relative_tolerance);
  for (const auto& s : trace.samples()) {
    if (!report.bound->valid_at(s.t)) continue;
    const double bound = (*report.bound)(s.t);
    account(check, s.t, s.h1_sq, bound * (1.0 + relative_tolerance));
  }
  MonitorReport out;
  out.checks.push_back(std::move(check));
  return out;
}

MonitorReport run_monitor(const NormTrace& trace, const ConstantLedger& ledger,
                          const CriterionReport& report, const MonitorTolerances& tol) {
  MonitorReport out;
  out.checks.push_back(check_energy_balance(trace, ledger.nu, tol.balance_relative));
  if (trace.size() >= 2) out.checks.push_back(evaluate_h1_inequality(trace, ledger, tol.h1_relative));
  out.checks.push_back(check_energy_inequality(trace, ledger, tol.energy_relative));
  if (report.satisfied) {
    auto dominance = check_bound_dominance(trace, report, tol.dominance_relative);
    out.checks.push_back(std::move(dominance.checks.front()));
  }
  return out;
}

bool MonitorReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed(); });
}

int MonitorReport::exit_code() const {
  bool estimate_failed = false;
  for (const auto& c : checks) {
    if (c.passed()) continue;
    if (c.solver_diagnostic) return 3;
    estimate_failed = true;
  }
  return estimate_failed ? 2 : 0;
}

std::optional<std::string> MonitorReport::first_failure() const {
  std::optional<std::string> name;
  double earliest = std::numeric_limits<double>::infinity();
  for (const auto& c : checks) {
    if (auto t = c.first_violation_t(); t && *t < earliest) {
      earliest = *t;
      name = c.name;
    }
  }
  return name;
}

nlohmann::json MonitorReport::to_json() const {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json entry{{"name", c.name},
                         {"max_violation", json_number(c.max_violation)},
                         {"tolerance", json_number(c.tolerance)},
                         {"violations", c.violations.size()},
                         {"solver_diagnostic", c.solver_diagnostic}};
    entry["first_violation_t"] = c.first_violation_t() ? nlohmann::json(*c.first_violation_t())
                                                       : nlohmann::json(nullptr);
    if (!c.violations.empty()) {
      const auto& v = c.violations.front();
      entry["first_violation"] = {{"observed", json_number(v.observed)}, {"allowed", json_number(v.allowed)}};
    }
    list.push_back(std::move(entry));
  }
  nlohmann::json j{{"checks", list}, {"passed", passed()}, {"exit_code", exit_code()}};
  const auto first = first_failure();
  j["first_failure"] = first ? nlohmann::json(*first) : nlohmann::json(nullptr);
  return j;
}

}  // namespace nsreg
