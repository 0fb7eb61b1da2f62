#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nsreg/spectral_field.hpp"

namespace nsreg {

/// Body force f. Steady and time-dependent forces are projected onto the
/// divergence-free space before use.
class Forcing {
 public:
  enum class Kind { zero, steady, time_dependent };
  using Generator = std::function<VectorField(double t)>;

  static Forcing none() { return Forcing(); }
  static Forcing steady(SpectralVelocity f);
  static Forcing time_dependent(Generator generator);

  Kind kind() const noexcept { return kind_; }
  /// P f(t); std::nullopt for the zero force.
  std::optional<SpectralVelocity> at(double t) const;

 private:
  Kind kind_ = Kind::zero;
  std::optional<SpectralVelocity> steady_;
  Generator generator_;
};

struct SolverConfig {
  double nu = 1.0;
  double dt = 1e-3;
  double t_end = 1.0;
  /// When set, dt is capped by cfl * dx / max|u| at every step.
  std::optional<double> cfl;
  /// Enstrophy ceiling treated as numerical blowup.
  double h1_ceiling = 1e12;
  /// Integrator tag; only the integrating-factor RK4 scheme is provided.
  std::string integrator = "if-rk4";

  /// Throws ConfigError unless nu, dt, t_end are positive and finite.
  void validate() const;
};

struct NormSample {
  double t;
  double l2_sq;      // ||u||^2
  double h1_sq;      // ||A^1/2 u||^2
  double h2_sq;      // ||A u||^2
  double f_sq;       // ||f||^2
  double f_dot_u;    // (f, u)
  double int_h1_sq;  // trapezoidal int_0^t ||u||_1^2
  double int_f_sq;   // trapezoidal int_0^t ||f||^2
};

/// Append-only time series of norms along a run.
class NormTrace {
 public:
  /// Appends the norms of u at time t and advances the running integrals.
  /// Throws UsageError when t does not increase.
  void record(double t, const SpectralVelocity& u, const std::optional<SpectralVelocity>& f);
  /// Appends a precomputed sample; checks the same invariants as record.
  void append(const NormSample& sample);

  const std::vector<NormSample>& samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }
  const NormSample& front() const { return samples_.front(); }
  const NormSample& back() const { return samples_.back(); }

 private:
  std::vector<NormSample> samples_;
};

enum class Termination { completed, blowup };

struct SimulationResult {
  NormTrace trace;
  SpectralVelocity final_state;
  Termination termination = Termination::completed;
  /// Time of the last finite state that was recorded.
  double last_valid_time = 0.0;
  std::string message;
  std::size_t steps = 0;
};

/// One step of du/dt = -nu A u - B(u, u) + P f with the exact viscous
/// integrating factor and classical RK4 on the rest. Throws NumericalBlowup
/// carrying t when the result is not finite.
SpectralVelocity step(const SpectralVelocity& u, const Forcing& f, double t, double dt,
                      const SolverConfig& config);

/// Integrates from t = 0 to config.t_end, recording norms after every step.
/// Blowup terminates the run and is reported in the result.
SimulationResult simulate(const SpectralVelocity& u0, const Forcing& f, const SolverConfig& config);

/// r = 1/2 d/dt ||u||^2 + nu ||u||_1^2 - (f, u) per sample.
std::vector<double> energy_balance_residual(const NormTrace& trace, double nu);

/// Second-order finite-difference derivative on a possibly non-uniform mesh:
/// centered in the interior, one-sided at both ends. Needs >= 2 samples.
std::vector<double> differentiate(const std::vector<double>& t, const std::vector<double>& y);

}  // namespace nsreg
