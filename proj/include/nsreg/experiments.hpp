#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nsreg/bounds.hpp"
#include "nsreg/monitor.hpp"
#include "nsreg/ns_solver.hpp"
#include "nsreg/spectral_field.hpp"

namespace nsreg {

/// Named initial data: zero, shear, random, taylor-green, kolmogorov.
struct InitialSpec {
  std::string kind = "random";
  std::uint64_t seed = 0;
  double slope = -5.0 / 3.0;
  double amplitude = 1.0;
};

/// Named forcing: none, kolmogorov (steady amplitude*(sin y, 0, 0)) or
/// oscillating (amplitude*cos(frequency t)*(sin y, 0, 0)).
struct ForcingSpec {
  std::string kind = "none";
  double amplitude = 1.0;
  double frequency = 1.0;
};

/// Throws ConfigError for unknown kinds or invalid parameters.
SpectralVelocity make_initial(const WaveGrid& grid, const InitialSpec& spec);
Forcing make_forcing(const WaveGrid& grid, const ForcingSpec& spec);
/// sup_t ||f(t)|| of the named forcing.
double forcing_norm(const WaveGrid& grid, const ForcingSpec& spec);
/// int_0^T ||f||^2 of the named forcing, in closed form.
double forcing_integral(const WaveGrid& grid, const ForcingSpec& spec, double T);

CriterionInput criterion_input(const SpectralVelocity& u0);

/// Rescales u so that c11 ||su||^2 + arctan ||su||_1^2 equals target.
/// Throws DomainError for zero fields or targets outside (0, pi/2).
SpectralVelocity scale_to_free_lhs(const SpectralVelocity& u, const ConstantLedger& ledger,
                                   double target);

struct RunOutcome {
  std::uint64_t seed;
  CriterionReport report;
  SimulationResult simulation;
  MonitorReport monitor;
};

struct EnsembleConfig {
  int n = 16;
  int members = 20;
  double nu = 1.0;
  double t_end = 2.0;
  double dt = 1e-3;
  double slope = -5.0 / 3.0;
  std::uint64_t first_seed = 1;
  /// Force-free criterion value every member is scaled to.
  double target_lhs = 1.4;
  MonitorTolerances tolerances;
};

/// Force-free certified ensemble. Members run concurrently; results are in seed order.
std::vector<RunOutcome> run_certified_ensemble(const EnsembleConfig& config);

/// Zero-mean field with ||u|| = l2_norm and ||u||_1^2 = h1_sq built from a
/// unit shear mode and a mode of wavenumber K >= 2 in a transverse direction,
/// so that the pair interacts nonlinearly. Empty when no K inside the
/// dealiased band reaches the requested ratio.
std::optional<SpectralVelocity> two_mode_field(const WaveGrid& grid, double l2_norm, double h1_sq);

struct CompareConfig {
  double nu = 1.0;
  double h1_sq = 1.0;
  std::vector<double> sweep{1.0, 0.5, 0.2, 0.15, 0.12, 0.11, 0.1, 0.05, 0.01};
  double horizon_fraction = 1.0;
  bool simulate = false;
  int n = 32;
  double dt = 1e-3;
  double t_end = 1.0;
  MonitorTolerances tolerances;
};

struct ComparePoint {
  ComparisonRow row;
  /// Simulation was requested and the initial data fit on the grid.
  bool simulated = false;
  std::optional<Termination> termination;
  double last_valid_time = 0.0;
  std::optional<MonitorReport> monitor;
  /// False exactly when the point is certified and the run blew up before t_end.
  bool sound = true;
};

struct CompareResult {
  ComparisonTable table;
  std::vector<ComparePoint> points;
  bool sound() const;
};

CompareResult run_comparison(const CompareConfig& config);

/// One line per sweep point with a header.
std::string comparison_csv(const CompareResult& result);
nlohmann::json to_json(const CompareResult& result);

}  // namespace nsreg
