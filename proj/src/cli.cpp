#include "nsreg/cli.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nsreg/bounds.hpp"
#include "nsreg/calibration.hpp"
#include "nsreg/errors.hpp"
#include "nsreg/experiments.hpp"
#include "nsreg/monitor.hpp"
#include "nsreg/ns_solver.hpp"
#include "nsreg/trace_io.hpp"

namespace nsreg {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct GridOptions {
  int n = 16;
  double length = 2.0 * std::numbers::pi;
};

struct RunOptions {
  GridOptions grid;
  InitialSpec init;
  ForcingSpec forcing;
  double nu = 1.0;
  double t_end = 1.0;
  double dt = 1e-3;
  std::optional<double> cfl;
  double h1_ceiling = 1e12;
  CLI::Option* amplitude_opt = nullptr;
  CLI::Option* forcing_opt = nullptr;
};

struct BoundsOptions {
  bool free = false, steady = false, timedep = false;
  double l2 = 0.0, h1_sq = 0.0, f = 0.0, int_f_sq = 0.0;
  std::optional<double> t_end;
  double nu = 1.0;
  double lambda1 = 1.0;
  double embedding = default_embedding_constant();
  double interpolation = default_interpolation_constant();
  std::vector<double> times;
};

struct CompareOptions {
  CompareConfig config;
  std::vector<double> sweep;
  double sweep_from = 1.0, sweep_to = 0.01;
  int sweep_count = 0;
};

struct Output {
  std::string dir;
};

void add_grid(CLI::App* app, GridOptions& g) {
  app->add_option("--N", g.n, "Grid points per axis (even, >= 4)")->capture_default_str();
  app->add_option("--L", g.length, "Box side length")->capture_default_str();
}

void add_run(CLI::App* app, RunOptions& r) {
  add_grid(app, r.grid);
  app->add_option("--init", r.init.kind, "Initial data")
      ->check(CLI::IsMember({"zero", "shear", "random", "taylor-green", "kolmogorov"}))
      ->capture_default_str();
  app->add_option("--seed", r.init.seed, "Seed of random initial data")->capture_default_str();
  app->add_option("--slope", r.init.slope, "Energy spectrum slope of random initial data")->capture_default_str();
  r.amplitude_opt = app->add_option("--amplitude", r.init.amplitude, "Initial amplitude (L2 norm for random data)")
                        ->capture_default_str();
  r.forcing_opt = app->add_option("--forcing", r.forcing.kind, "Body force")
                      ->check(CLI::IsMember({"none", "kolmogorov", "oscillating"}))
                      ->capture_default_str();
  app->add_option("--forcing-amplitude", r.forcing.amplitude, "Amplitude of the body force")->capture_default_str();
  app->add_option("--forcing-frequency", r.forcing.frequency, "Angular frequency of the oscillating force")
      ->capture_default_str();
  app->add_option("--nu", r.nu, "Kinematic viscosity")->capture_default_str();
  app->add_option("--T", r.t_end, "Final time")->capture_default_str();
  app->add_option("--dt", r.dt, "Time step")->capture_default_str();
  app->add_option("--cfl", r.cfl, "Cap dt by cfl * dx / max|u|");
  app->add_option("--h1-ceiling", r.h1_ceiling, "Enstrophy treated as numerical blowup")->capture_default_str();
}

void add_out(CLI::App* app, Output& out) {
  app->add_option("--out", out.dir, "Output directory (trace.csv, meta.json, report.json, index.json)");
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

class OutputDir {
 public:
  explicit OutputDir(const std::string& dir) : dir_(dir) {
    if (!dir_.empty()) fs::create_directories(dir_);
  }
  bool enabled() const { return !dir_.empty(); }
  void write(const std::string& name, const std::string& content) {
    write_file_atomically(dir_ / name, content);
    files_.push_back(name);
  }
  /// index.json goes last, so its presence marks a complete directory.
  void finish(const std::string& command, int exit_code) {
    if (!enabled()) return;
    const json index{{"command", command}, {"files", files_}, {"exit_code", exit_code}};
    write_file_atomically(dir_ / "index.json", index.dump(2) + "\n");
  }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
};

struct RunSetup {
  WaveGrid grid;
  SpectralVelocity u0;
  Forcing forcing;
  SolverConfig solver;
  ConstantLedger ledger;
  ForcingSpec forcing_spec;
};

RunSetup prepare_run(RunOptions r) {
  const auto grid = WaveGrid::make(r.grid.n, r.grid.length);
  const double lambda1 = grid.scale() * grid.scale();
  if (!(r.nu > 0.0)) throw ConfigError("nu must be positive");
  if (r.init.kind == "kolmogorov") {
    if (r.forcing_opt->count() == 0) r.forcing.kind = "kolmogorov";
    if (r.amplitude_opt->count() == 0) r.init.amplitude = r.forcing.amplitude / (r.nu * lambda1);
  }
  SolverConfig solver;
  solver.nu = r.nu;
  solver.dt = r.dt;
  solver.t_end = r.t_end;
  solver.cfl = r.cfl;
  solver.h1_ceiling = r.h1_ceiling;
  solver.validate();
  return {grid,   make_initial(grid, r.init), make_forcing(grid, r.forcing),
          solver, default_ledger(r.nu, lambda1), r.forcing};
}

json run_config_json(const RunOptions& r, const RunSetup& s) {
  return {{"N", s.grid.n()},
          {"L", s.grid.length()},
          {"init", {{"kind", r.init.kind}, {"seed", r.init.seed}, {"slope", r.init.slope}, {"amplitude", r.init.amplitude}}},
          {"forcing",
           {{"kind", s.forcing_spec.kind},
            {"amplitude", s.forcing_spec.amplitude},
            {"frequency", s.forcing_spec.frequency}}},
          {"solver", to_json(s.solver)}};
}

json summary_json(const SimulationResult& result) {
  const auto& first = result.trace.front();
  const auto& last = result.trace.back();
  json j{{"termination", to_string(result.termination)},
         {"message", result.message},
         {"steps", result.steps},
         {"last_valid_time", result.last_valid_time},
         {"initial", {{"l2_sq", first.l2_sq}, {"h1_sq", first.h1_sq}}},
         {"final", {{"t", last.t}, {"l2_sq", last.l2_sq}, {"h1_sq", last.h1_sq}}}};
  j["energy_ratio"] = first.l2_sq > 0.0 ? json(last.l2_sq / first.l2_sq) : json(nullptr);
  return j;
}

std::string trace_csv(const NormTrace& trace, double nu) {
  std::ostringstream os;
  write_trace_csv(os, trace, nu);
  return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

json meta_json(const std::string& command, json config, std::chrono::steady_clock::time_point start) {
  return {{"command", command},
          {"config", std::move(config)},
          {"wall_time_s", seconds_since(start)},
          {"timestamp", timestamp()}};
}

// ------------------------------------------------------------ subcommands

int cmd_simulate(const RunOptions& r, const Output& out) {
  const auto start = std::chrono::steady_clock::now();
  const auto s = prepare_run(r);
  const auto result = simulate(s.u0, s.forcing, s.solver);
  const auto csv = trace_csv(result.trace, s.solver.nu);
  const auto report = summary_json(result);
  if (result.termination == Termination::blowup) std::cerr << "blowup: " << result.message << "\n";
  OutputDir dir(out.dir);
  if (!dir.enabled()) {
    std::cout << csv;
    return kExitOk;
  }
  dir.write("trace.csv", csv);
  dir.write("report.json", report.dump(2) + "\n");
  dir.write("meta.json", meta_json("simulate", run_config_json(r, s), start).dump(2) + "\n");
  dir.finish("simulate", kExitOk);
  return kExitOk;
}

CriterionReport evaluate_criterion(const BoundsOptions& b, const ConstantLedger& ledger) {
  const CriterionInput in{b.l2, b.h1_sq, b.f, b.int_f_sq};
  if (b.steady) {
    if (!b.t_end) throw ConfigError("--steady needs --T");
    return arctan_bound_steady(*b.t_end, in, ledger);
  }
  if (b.timedep) return arctan_bound_timedep(b.t_end.value_or(kInfinity), in, ledger);
  return arctan_bound_free(in, ledger);
}

int cmd_bounds(const BoundsOptions& b, const Output& out) {
  const auto start = std::chrono::steady_clock::now();
  if (static_cast<int>(b.free) + static_cast<int>(b.steady) + static_cast<int>(b.timedep) > 1) {
    throw ConfigError("choose at most one of --free, --steady, --timedep");
  }
  const auto ledger = derive_constants(b.nu, b.lambda1, b.embedding, b.interpolation);
  const auto report = evaluate_criterion(b, ledger);

  json classical;
  if (b.steady) {
    classical = {{"kind", "classical_forced"},
                 {"horizon", json_number(classical_horizon_forced(b.h1_sq, b.f, ledger))}};
  } else {
    classical = {{"kind", "classical_free"}, {"horizon", json_number(classical_horizon_free(b.h1_sq, b.nu))}};
  }
  json j{{"criterion", b.times.empty() ? to_json(report) : to_json(report, b.times)},
         {"classical", classical},
         {"ledger", ledger.to_json()}};
  const auto text = j.dump(2) + "\n";
  OutputDir dir(out.dir);
  std::cout << text;
  if (dir.enabled()) {
    dir.write("report.json", text);
    json config{{"l2", b.l2}, {"h1sq", b.h1_sq}, {"f", b.f}, {"intf2", b.int_f_sq}, {"nu", b.nu}};
    config["T"] = b.t_end ? json_number(*b.t_end) : json(nullptr);
    dir.write("meta.json", meta_json("bounds", config, start).dump(2) + "\n");
    dir.finish("bounds", kExitOk);
  }
  return kExitOk;
}

std::vector<double> build_sweep(const CompareOptions& c) {
  if (!c.sweep.empty()) return c.sweep;
  if (c.sweep_count <= 0) return c.config.sweep;
  if (!(c.sweep_from > 0.0 && c.sweep_to > 0.0)) throw ConfigError("geometric sweep needs positive end points");
  std::vector<double> s;
  for (int i = 0; i < c.sweep_count; ++i) {
    const double f = c.sweep_count == 1 ? 0.0 : static_cast<double>(i) / (c.sweep_count - 1);
    s.push_back(c.sweep_from * std::pow(c.sweep_to / c.sweep_from, f));
  }
  return s;
}

int cmd_compare(const CompareOptions& c, const Output& out) {
  const auto start = std::chrono::steady_clock::now();
  auto config = c.config;
  config.sweep = build_sweep(c);
  const auto result = run_comparison(config);
  const auto csv = comparison_csv(result);

  int code = kExitOk;
  for (const auto& p : result.points) {
    if (p.monitor) code = std::max(code, p.monitor->exit_code());
  }
  if (!result.sound()) {
    std::cerr << "soundness violation: a certified point blew up before T\n";
    code = std::max(code, kExitViolation);
  }
  OutputDir dir(out.dir);
  if (!dir.enabled()) {
    std::cout << csv;
    return code;
  }
  dir.write("comparison.csv", csv);
  dir.write("report.json", to_json(result).dump(2) + "\n");
  json meta_config{{"nu", config.nu},
                   {"h1sq", config.h1_sq},
                   {"sweep", config.sweep},
                   {"horizon_fraction", config.horizon_fraction},
                   {"simulate", config.simulate},
                   {"N", config.n},
                   {"dt", config.dt},
                   {"T", config.t_end}};
  dir.write("meta.json", meta_json("compare", meta_config, start).dump(2) + "\n");
  dir.finish("compare", code);
  return code;
}

int cmd_calibrate(const CalibrationConfig& c, const Output& out) {
  const auto start = std::chrono::steady_clock::now();
  const auto result = calibrate(c);
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
  const auto text = result.to_json().dump(2) + "\n";
  OutputDir dir(out.dir);
  std::cout << text;
  if (dir.enabled()) {
    dir.write("report.json", text);
    json config{{"N", c.n}, {"members", c.members}, {"seed", c.first_seed}, {"slope", c.slope},
                {"quad_factor", c.quad_factor}};
    dir.write("meta.json", meta_json("calibrate", config, start).dump(2) + "\n");
    dir.finish("calibrate", kExitOk);
  }
  return kExitOk;
}

int cmd_monitor(const RunOptions& r, const MonitorTolerances& tol, const Output& out) {
  const auto start = std::chrono::steady_clock::now();
  const auto s = prepare_run(r);
  const auto result = simulate(s.u0, s.forcing, s.solver);

  CriterionInput in = criterion_input(s.u0);
  CriterionReport criterion;
  if (s.forcing.kind() == Forcing::Kind::zero) {
    criterion = arctan_bound_free(in, s.ledger);
  } else if (s.forcing.kind() == Forcing::Kind::steady) {
    in.f_norm = forcing_norm(s.grid, s.forcing_spec);
    criterion = arctan_bound_steady(s.solver.t_end, in, s.ledger);
  } else {
    in.int_f_sq = forcing_integral(s.grid, s.forcing_spec, s.solver.t_end);
    criterion = arctan_bound_timedep(s.solver.t_end, in, s.ledger);
  }
  const auto monitor = run_monitor(result.trace, s.ledger, criterion, tol);
  const int code = monitor.exit_code();

  json report{{"monitor", monitor.to_json()}, {"criterion", to_json(criterion)}, {"run", summary_json(result)}};
  const auto text = report.dump(2) + "\n";
  OutputDir dir(out.dir);
  if (!dir.enabled()) {
    std::cout << text;
    return code;
  }
  dir.write("trace.csv", trace_csv(result.trace, s.solver.nu));
  dir.write("report.json", text);
  auto config = run_config_json(r, s);
  config["tolerances"] = {{"h1_relative", tol.h1_relative},
                          {"energy_relative", tol.energy_relative},
                          {"dominance_relative", tol.dominance_relative},
                          {"balance_relative", tol.balance_relative}};
  dir.write("meta.json", meta_json("monitor", config, start).dump(2) + "\n");
  dir.finish("monitor", code);
  return code;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Periodic Navier-Stokes simulator and regularity-certificate engine", "nsreg"};
  app.set_config("--config", "", "Key-value configuration file; command-line flags take precedence");
  app.require_subcommand(1);

  RunOptions sim_opts;
  Output sim_out;
  auto* sim = app.add_subcommand("simulate", "Run a simulation and write its norm trace");
  add_run(sim, sim_opts);
  add_out(sim, sim_out);

  BoundsOptions bnd;
  Output bnd_out;
  auto* bounds = app.add_subcommand("bounds", "Evaluate an arctan criterion and the classical horizon");
  bounds->add_flag("--free", bnd.free, "Force-free criterion (default)");
  bounds->add_flag("--steady", bnd.steady, "Steady forcing criterion");
  bounds->add_flag("--timedep", bnd.timedep, "Time-dependent forcing criterion");
  bounds->add_option("--l2", bnd.l2, "||u0||")->capture_default_str();
  bounds->add_option("--h1sq", bnd.h1_sq, "||u0||_1^2")->capture_default_str();
  bounds->add_option("--f", bnd.f, "||f|| of a steady force")->capture_default_str();
  bounds->add_option("--intf2", bnd.int_f_sq, "Integral of ||f||^2 over [0, T]")->capture_default_str();
  bounds->add_option("--T", bnd.t_end, "Time horizon");
  bounds->add_option("--nu", bnd.nu, "Kinematic viscosity")->capture_default_str();
  bounds->add_option("--lambda1", bnd.lambda1, "First Stokes eigenvalue")->capture_default_str();
  bounds->add_option("--embedding", bnd.embedding, "L6 embedding constant")->capture_default_str();
  bounds->add_option("--interpolation", bnd.interpolation, "Gradient interpolation constant")
      ->capture_default_str();
  bounds->add_option("--times", bnd.times, "Times at which to sample the certified bound")->delimiter(',');
  add_out(bounds, bnd_out);

  CompareOptions cmp;
  Output cmp_out;
  auto* compare = app.add_subcommand("compare", "Classical horizon against the force-free criterion");
  compare->add_option("--nu", cmp.config.nu, "Kinematic viscosity")->capture_default_str();
  compare->add_option("--h1sq", cmp.config.h1_sq, "Fixed ||u0||_1^2")->capture_default_str();
  compare->add_option("--sweep", cmp.sweep, "Comma-separated ||u0|| values")->delimiter(',');
  compare->add_option("--sweep-from", cmp.sweep_from, "Largest ||u0|| of a geometric sweep")->capture_default_str();
  compare->add_option("--sweep-to", cmp.sweep_to, "Smallest ||u0|| of a geometric sweep")->capture_default_str();
  compare->add_option("--sweep-count", cmp.sweep_count, "Points of a geometric sweep");
  compare->add_option("--horizon-fraction", cmp.config.horizon_fraction, "T* as a fraction of the classical horizon")
      ->capture_default_str();
  compare->add_flag("--simulate", cmp.config.simulate, "Attach a monitored simulation to each point");
  compare->add_option("--N", cmp.config.n, "Grid of attached simulations")->capture_default_str();
  compare->add_option("--dt", cmp.config.dt, "Time step of attached simulations")->capture_default_str();
  compare->add_option("--T", cmp.config.t_end, "Final time of attached simulations")->capture_default_str();
  add_out(compare, cmp_out);

  CalibrationConfig cal;
  Output cal_out;
  auto* calib = app.add_subcommand("calibrate", "Empirical lower bounds on the embedding constants");
  calib->add_option("--N", cal.n, "Grid points per axis")->capture_default_str();
  calib->add_option("--members", cal.members, "Ensemble size")->capture_default_str();
  calib->add_option("--seed", cal.first_seed, "First seed")->capture_default_str();
  calib->add_option("--slope", cal.slope, "Energy spectrum slope")->capture_default_str();
  calib->add_option("--quad-factor", cal.quad_factor, "Quadrature refinement over the grid")->capture_default_str();
  add_out(calib, cal_out);

  RunOptions mon_opts;
  MonitorTolerances tol;
  Output mon_out;
  auto* mon = app.add_subcommand("monitor", "Simulate and verify the estimates along the run");
  add_run(mon, mon_opts);
  mon->add_option("--tol-h1", tol.h1_relative, "Enstrophy inequality slack")->capture_default_str();
  mon->add_option("--tol-energy", tol.energy_relative, "Energy inequality slack")->capture_default_str();
  mon->add_option("--tol-dominance", tol.dominance_relative, "Bound dominance slack")->capture_default_str();
  mon->add_option("--tol-balance", tol.balance_relative, "Energy balance slack")->capture_default_str();
  add_out(mon, mon_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*sim) return cmd_simulate(sim_opts, sim_out);
    if (*bounds) return cmd_bounds(bnd, bnd_out);
    if (*compare) return cmd_compare(cmp, cmp_out);
    if (*calib) return cmd_calibrate(cal, cal_out);
    if (*mon) return cmd_monitor(mon_opts, tol, mon_out);
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInconsistentData;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ShapeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace nsreg
