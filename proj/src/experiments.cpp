#include "nsreg/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "nsreg/errors.hpp"
#include "nsreg/trace_io.hpp"

namespace nsreg {

namespace {

// amplitude * sin(k x_along) in component `axis`.
VectorField sine_mode(const WaveGrid& grid, int axis, int along, int k, double amplitude) {
  VectorField raw(grid);
  int plus[3] = {0, 0, 0};
  int minus[3] = {0, 0, 0};
  plus[along] = k;
  minus[along] = -k;
  raw.at(axis, grid.flat(plus[0], plus[1], plus[2])) = Complex(0.0, -0.5 * amplitude);
  raw.at(axis, grid.flat(minus[0], minus[1], minus[2])) = Complex(0.0, 0.5 * amplitude);
  return raw;
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw ConfigError(std::string(what) + " must be finite");
}

}  // namespace

SpectralVelocity make_initial(const WaveGrid& grid, const InitialSpec& spec) {
  require_finite(spec.amplitude, "initial amplitude");
  if (spec.kind == "zero") return SpectralVelocity::zero(grid);
  if (spec.kind == "shear") return shear_flow(grid, spec.amplitude);
  if (spec.kind == "taylor-green") return taylor_green(grid, spec.amplitude);
  if (spec.kind == "kolmogorov") return shear_flow(grid, spec.amplitude);
  if (spec.kind == "random") {
    if (spec.amplitude < 0.0) throw ConfigError("random amplitude must be non-negative");
    require_finite(spec.slope, "spectral slope");
    return random_divfree_field(grid, spec.seed, spec.slope, spec.amplitude);
  }
  throw ConfigError("unknown initial condition '" + spec.kind + "'");
}

Forcing make_forcing(const WaveGrid& grid, const ForcingSpec& spec) {
  require_finite(spec.amplitude, "forcing amplitude");
  require_finite(spec.frequency, "forcing frequency");
  if (spec.kind == "none") return Forcing::none();
  if (spec.kind == "kolmogorov") return Forcing::steady(shear_flow(grid, spec.amplitude));
  if (spec.kind == "oscillating") {
    const VectorField base = shear_flow(grid, spec.amplitude).coefficients();
    const double omega = spec.frequency;
    return Forcing::time_dependent([base, omega](double t) {
      VectorField f = base;
      f *= std::cos(omega * t);
      return f;
    });
  }
  throw ConfigError("unknown forcing '" + spec.kind + "'");
}

double forcing_norm(const WaveGrid& grid, const ForcingSpec& spec) {
  if (spec.kind == "none") return 0.0;
  make_forcing(grid, spec);
  return sobolev_norm(shear_flow(grid, spec.amplitude), 0.0);
}

double forcing_integral(const WaveGrid& grid, const ForcingSpec& spec, double T) {
  const double f = forcing_norm(grid, spec);
  if (spec.kind == "oscillating" && spec.frequency != 0.0) {
    const double w = spec.frequency;
    return f * f * (0.5 * T + std::sin(2.0 * w * T) / (4.0 * w));
  }
  return f * f * T;
}

CriterionInput criterion_input(const SpectralVelocity& u0) {
  return {sobolev_norm(u0, 0.0), sobolev_norm_squared(u0, 1.0), 0.0, 0.0};
}

SpectralVelocity scale_to_free_lhs(const SpectralVelocity& u, const ConstantLedger& ledger,
                                   double target) {
  if (!(target > 0.0 && target < kHalfPi)) throw DomainError("target criterion value must lie in (0, pi/2)");
  const double l2_sq = sobolev_norm_squared(u, 0.0);
  const double h1_sq = sobolev_norm_squared(u, 1.0);
  if (l2_sq == 0.0) throw DomainError("cannot rescale the zero field");
  // g(s) = c11 s l2_sq + arctan(s h1_sq) for s = factor^2 is increasing.
  const auto g = [&](double s) { return ledger.c11 * s * l2_sq + std::atan(s * h1_sq) - target; };
  const double hi = std::min(target / (ledger.c11 * l2_sq), std::tan(target) / h1_sq);
  std::uintmax_t iterations = 200;
  const auto [lo_s, hi_s] = boost::math::tools::toms748_solve(
      g, 0.0, hi, -target, g(hi), boost::math::tools::eps_tolerance<double>(52), iterations);
  double factor = std::sqrt(g(hi_s) <= 0.0 ? hi_s : lo_s);
  // Rounding of the rescaled norms may land above target.
  auto v = u.scaled(factor);
  while (arctan_bound_free(criterion_input(v), ledger).lhs > target) {
    factor *= 1.0 - 4.0 * std::numeric_limits<double>::epsilon();
    v = u.scaled(factor);
  }
  return v;
}

std::vector<RunOutcome> run_certified_ensemble(const EnsembleConfig& config) {
  if (config.members < 1) throw ConfigError("ensemble needs at least one member");
  const auto grid = WaveGrid::make(config.n);
  const auto ledger = default_ledger(config.nu);
  SolverConfig solver;
  solver.nu = config.nu;
  solver.dt = config.dt;
  solver.t_end = config.t_end;
  solver.validate();

  std::vector<std::future<RunOutcome>> jobs;
  for (int m = 0; m < config.members; ++m) {
    const std::uint64_t seed = config.first_seed + static_cast<std::uint64_t>(m);
    jobs.push_back(std::async(std::launch::async, [=, &config] {
      const auto raw = random_divfree_field(grid, seed, config.slope, 1.0);
      const auto u0 = scale_to_free_lhs(raw, ledger, config.target_lhs);
      auto report = arctan_bound_free(criterion_input(u0), ledger);
      auto sim = simulate(u0, Forcing::none(), solver);
      auto monitor = run_monitor(sim.trace, ledger, report, config.tolerances);
      return RunOutcome{seed, std::move(report), std::move(sim), std::move(monitor)};
    }));
  }
  std::vector<RunOutcome> results;
  results.reserve(jobs.size());
  for (auto& j : jobs) results.push_back(j.get());
  return results;
}

std::optional<SpectralVelocity> two_mode_field(const WaveGrid& grid, double l2_norm, double h1_sq) {
  if (!(l2_norm >= 0.0) || !(h1_sq >= 0.0)) throw DomainError("norms must be non-negative");
  const double unit = grid.volume() / 2.0;  // ||sin(k y)||^2 per component
  const double lambda = grid.scale() * grid.scale();
  const double a = l2_norm * l2_norm / unit;  // p^2 + q^2
  const double h = h1_sq / (unit * lambda);   // p^2 + K^2 q^2
  if (h < a * (1.0 - 1e-12)) throw DomainError("norms violate the Poincare inequality");
  if (a == 0.0) {
    if (h == 0.0) return SpectralVelocity::zero(grid);
    return std::nullopt;
  }
  if (h <= a) return shear_flow(grid, std::sqrt(a));
  const int k = std::max(2, static_cast<int>(std::ceil(std::sqrt(h / a) - 1e-12)));
  if (k > grid.dealias_cutoff()) return std::nullopt;
  const double q_sq = (h - a) / (static_cast<double>(k) * k - 1.0);
  const double p_sq = std::max(0.0, a - q_sq);
  VectorField raw = sine_mode(grid, 0, 1, 1, std::sqrt(p_sq));
  raw += sine_mode(grid, 2, 0, k, std::sqrt(q_sq));
  return leray_project(std::move(raw));
}

bool CompareResult::sound() const {
  for (const auto& p : points)
    if (!p.sound) return false;
  return true;
}

CompareResult run_comparison(const CompareConfig& config) {
  const auto ledger = default_ledger(config.nu);
  CompareResult result{interval_comparison(config.h1_sq, config.sweep, ledger, config.horizon_fraction), {}};
  result.points.resize(result.table.rows.size());
  for (std::size_t i = 0; i < result.points.size(); ++i) result.points[i].row = result.table.rows[i];
  if (!config.simulate) return result;

  const auto grid = WaveGrid::make(config.n);
  SolverConfig solver;
  solver.nu = config.nu;
  solver.dt = config.dt;
  solver.t_end = config.t_end;
  solver.validate();

  std::vector<std::future<void>> jobs;
  for (auto& point : result.points) {
    jobs.push_back(std::async(std::launch::async, [&point, &grid, &ledger, &solver, &config] {
      const auto u0 = two_mode_field(grid, point.row.l2_norm, config.h1_sq);
      if (!u0) return;
      point.simulated = true;
      const auto sim = simulate(*u0, Forcing::none(), solver);
      point.termination = sim.termination;
      point.last_valid_time = sim.last_valid_time;
      const auto report = arctan_bound_free(criterion_input(*u0), ledger);
      point.monitor = run_monitor(sim.trace, ledger, report, config.tolerances);
      const bool blew_up = sim.termination == Termination::blowup && sim.last_valid_time < config.t_end;
      point.sound = !(point.row.certified_free && blew_up);
    }));
  }
  for (auto& j : jobs) j.get();
  return result;
}

std::string comparison_csv(const CompareResult& result) {
  std::ostringstream os;
  os << "l2_norm,h1_sq,classical_horizon,lhs_free,certified_free,lhs_printed,certified_printed,"
        "extends_classical,simulated,termination,last_valid_time,monitor_passed,sound\n";
  char buf[64];
  const auto num = [&buf](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (const auto& p : result.points) {
    const auto& r = p.row;
    os << num(r.l2_norm) << ',' << num(result.table.h1_sq) << ',' << num(r.classical_horizon) << ','
       << num(r.lhs_free) << ',' << r.certified_free << ',' << num(r.lhs_printed) << ','
       << r.certified_printed << ',' << r.extends_classical << ',' << p.simulated << ','
       << (p.termination ? to_string(*p.termination) : "") << ','
       << (p.simulated ? num(p.last_valid_time) : "") << ','
       << (p.monitor ? (p.monitor->passed() ? "1" : "0") : "") << ',' << p.sound << '\n';
  }
  return os.str();
}

nlohmann::json to_json(const CompareResult& result) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& p : result.points) {
    const auto& r = p.row;
    nlohmann::json row = {{"l2_norm", r.l2_norm},
                          {"classical_horizon", json_number(r.classical_horizon)},
                          {"lhs_free", r.lhs_free},
                          {"certified_free", r.certified_free},
                          {"lhs_printed", json_number(r.lhs_printed)},
                          {"certified_printed", r.certified_printed},
                          {"extends_classical", r.extends_classical},
                          {"simulated", p.simulated},
                          {"sound", p.sound}};
    if (p.termination) row["termination"] = to_string(*p.termination);
    if (p.simulated) row["last_valid_time"] = p.last_valid_time;
    if (p.monitor) row["monitor"] = p.monitor->to_json();
    rows.push_back(std::move(row));
  }
  const auto& t = result.table;
  return {{"h1_sq", t.h1_sq},
          {"nu", t.nu},
          {"horizon_fraction", t.horizon_fraction},
          {"threshold_l2", t.threshold_l2 ? nlohmann::json(*t.threshold_l2) : nlohmann::json(nullptr)},
          {"rows", std::move(rows)},
          {"sound", result.sound()}};
}

}  // namespace nsreg
