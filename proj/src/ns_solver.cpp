#include "nsreg/ns_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nsreg/errors.hpp"

namespace nsreg {
namespace {

bool all_finite(const VectorField& u) {
  for (int a = 0; a < 3; ++a)
    for (const auto& c : u.component(a))
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return true;
}

double max_speed(const SpectralVelocity& u) {
  const auto phys = to_physical(u);
  double m = 0.0;
  for (std::size_t x = 0; x < phys.samples[0].size(); ++x) {
    const double s = std::hypot(phys.samples[0][x], phys.samples[1][x], phys.samples[2][x]);
    m = std::max(m, s);
  }
  return m;
}

// Integrating-factor RK4 for du/dt = -nu A u + N(u, t), N = -B(u, u) + P f.
class Stepper {
 public:
  Stepper(const WaveGrid& grid, const Forcing& forcing, double nu)
      : grid_(grid),
        forcing_(forcing),
        nu_(nu),
        evaluator_(grid),
        k1_(grid), k2_(grid), k3_(grid), k4_(grid), stage_(grid) {}

  SpectralVelocity advance(const SpectralVelocity& u, double t, double h) {
    if (h != cached_h_) {
      full_.resize(grid_.size());
      half_.resize(grid_.size());
      for (std::size_t i = 0; i < grid_.size(); ++i) {
        full_[i] = std::exp(-nu_ * grid_.k_squared(i) * h);
        half_[i] = std::exp(-0.5 * nu_ * grid_.k_squared(i) * h);
      }
      cached_h_ = h;
    }
    const VectorField& un = u.coefficients();

    rhs(un, t, k1_);
    combine(stage_, half_, un, 0.5 * h, k1_, half_);
    rhs(stage_, t + 0.5 * h, k2_);
    combine(stage_, half_, un, 0.5 * h, k2_, nullptr);
    rhs(stage_, t + 0.5 * h, k3_);
    combine(stage_, full_, un, h, k3_, half_);
    rhs(stage_, t + h, k4_);

    VectorField next(grid_);
    const double w = h / 6.0;
    for (int a = 0; a < 3; ++a) {
      auto dst = next.component(a);
      const auto u0 = un.component(a);
      const auto c1 = k1_.component(a), c2 = k2_.component(a);
      const auto c3 = k3_.component(a), c4 = k4_.component(a);
      for (std::size_t i = 0; i < dst.size(); ++i) {
        dst[i] = full_[i] * u0[i] +
                 w * (full_[i] * c1[i] + 2.0 * half_[i] * (c2[i] + c3[i]) + c4[i]);
      }
    }
    if (!all_finite(next)) {
      throw NumericalBlowup("non-finite coefficients after step from t = " + std::to_string(t), t);
    }
    return leray_project(std::move(next));
  }

 private:
  void rhs(const VectorField& u, double t, VectorField& out) {
    evaluator_.negative_advection(u, out);
    if (auto f = forcing_.at(t)) out += f->coefficients();
  }

  // dst = e1 * (base + h * e2 * k); a null e2 means no factor on k.
  static void combine(VectorField& dst, const std::vector<double>& e1, const VectorField& base,
                      double h, const VectorField& k, const std::vector<double>& e2) {
    for (int a = 0; a < 3; ++a) {
      auto d = dst.component(a);
      const auto b = base.component(a);
      const auto c = k.component(a);
      for (std::size_t i = 0; i < d.size(); ++i) d[i] = e1[i] * b[i] + h * e2[i] * c[i];
    }
  }
  static void combine(VectorField& dst, const std::vector<double>& e1, const VectorField& base,
                      double h, const VectorField& k, std::nullptr_t) {
    for (int a = 0; a < 3; ++a) {
      auto d = dst.component(a);
      const auto b = base.component(a);
      const auto c = k.component(a);
      for (std::size_t i = 0; i < d.size(); ++i) d[i] = e1[i] * b[i] + h * c[i];
    }
  }

  WaveGrid grid_;
  const Forcing& forcing_;
  double nu_;
  NonlinearEvaluator evaluator_;
  VectorField k1_, k2_, k3_, k4_, stage_;
  std::vector<double> full_, half_;
  double cached_h_ = -1.0;
};

}  // namespace

// ------------------------------------------------------------------ Forcing

Forcing Forcing::steady(SpectralVelocity f) {
  Forcing out;
  out.kind_ = Kind::steady;
  out.steady_ = std::move(f);
  return out;
}

Forcing Forcing::time_dependent(Generator generator) {
  if (!generator) throw ConfigError("time-dependent forcing needs a generator");
  Forcing out;
  out.kind_ = Kind::time_dependent;
  out.generator_ = std::move(generator);
  return out;
}

std::optional<SpectralVelocity> Forcing::at(double t) const {
  switch (kind_) {
    case Kind::zero:
      return std::nullopt;
    case Kind::steady:
      return steady_;
    case Kind::time_dependent:
      return leray_project(generator_(t));
  }
  return std::nullopt;
}

// ------------------------------------------------------------- SolverConfig

void SolverConfig::validate() const {
  auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!positive(nu)) throw ConfigError("viscosity must be positive");
  if (!positive(dt)) throw ConfigError("time step must be positive");
  if (!positive(t_end)) throw ConfigError("final time must be positive");
  if (cfl && !positive(*cfl)) throw ConfigError("CFL number must be positive");
  if (!positive(h1_ceiling)) throw ConfigError("enstrophy ceiling must be positive");
  if (integrator != "if-rk4") throw ConfigError("unknown integrator '" + integrator + "'");
}

// ---------------------------------------------------------------- NormTrace

void NormTrace::record(double t, const SpectralVelocity& u, const std::optional<SpectralVelocity>& f) {
  NormSample s{};
  s.t = t;
  s.l2_sq = sobolev_norm_squared(u, 0.0);
  s.h1_sq = sobolev_norm_squared(u, 1.0);
  s.h2_sq = sobolev_norm_squared(u, 2.0);
  if (f) {
    s.f_sq = sobolev_norm_squared(*f, 0.0);
    s.f_dot_u = inner_product(*f, u);
  }
  if (!samples_.empty()) {
    const auto& prev = samples_.back();
    const double h = t - prev.t;
    s.int_h1_sq = prev.int_h1_sq + 0.5 * h * (prev.h1_sq + s.h1_sq);
    s.int_f_sq = prev.int_f_sq + 0.5 * h * (prev.f_sq + s.f_sq);
  }
  append(s);
}

void NormTrace::append(const NormSample& s) {
  if (!samples_.empty()) {
    const auto& prev = samples_.back();
    if (!(s.t > prev.t)) throw UsageError("trace times must increase strictly");
    if (s.int_h1_sq < prev.int_h1_sq || s.int_f_sq < prev.int_f_sq) {
      throw UsageError("trace integrals must be non-decreasing");
    }
  }
  if (s.l2_sq < 0.0 || s.h1_sq < 0.0 || s.h2_sq < 0.0 || s.f_sq < 0.0) {
    throw UsageError("trace squares must be non-negative");
  }
  samples_.push_back(s);
}

// ------------------------------------------------------------------ driver

SpectralVelocity step(const SpectralVelocity& u, const Forcing& f, double t, double dt,
                      const SolverConfig& config) {
  config.validate();
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
  Stepper stepper(u.grid(), f, config.nu);
  return stepper.advance(u, t, dt);
}

SimulationResult simulate(const SpectralVelocity& u0, const Forcing& f, const SolverConfig& config) {
  config.validate();
  SimulationResult result{NormTrace{}, u0, Termination::completed, 0.0, {}, 0};
  Stepper stepper(u0.grid(), f, config.nu);
  result.trace.record(0.0, u0, f.at(0.0));

  const double dx = u0.grid().length() / u0.grid().n();
  SpectralVelocity u = u0;
  double t = 0.0;
  std::size_t n = 0;
  while (t < config.t_end) {
    double h = config.dt;
    if (config.cfl) {
      const double speed = max_speed(u);
      if (speed > 0.0) h = std::min(h, *config.cfl * dx / speed);
    }
    // Land exactly on t_end instead of leaving a sliver of a step.
    double t_next = config.cfl ? t + h : static_cast<double>(n + 1) * config.dt;
    if (t_next > config.t_end || config.t_end - t_next < 1e-9 * h) t_next = config.t_end;
    h = t_next - t;
    try {
      u = stepper.advance(u, t, h);
    } catch (const NumericalBlowup& e) {
      result.termination = Termination::blowup;
      result.message = e.what();
      break;
    }
    result.trace.record(t_next, u, f.at(t_next));
    t = t_next;
    ++n;
    const double h1 = result.trace.back().h1_sq;
    if (!std::isfinite(h1) || h1 > config.h1_ceiling) {
      result.termination = Termination::blowup;
      result.message = "enstrophy exceeded the ceiling at t = " + std::to_string(t);
      break;
    }
  }
  result.steps = n;
  result.final_state = std::move(u);
  result.last_valid_time = result.trace.back().t;
  if (result.termination == Termination::completed) result.message = "completed";
  return result;
}

std::vector<double> differentiate(const std::vector<double>& t, const std::vector<double>& y) {
  const std::size_t n = t.size();
  if (n < 2 || y.size() != n) throw ShapeError("differentiation needs at least 2 matching samples");
  std::vector<double> d(n);
  if (n == 2) {
    d[0] = d[1] = (y[1] - y[0]) / (t[1] - t[0]);
    return d;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h1 = t[i] - t[i - 1], h2 = t[i + 1] - t[i];
    d[i] = -h2 / (h1 * (h1 + h2)) * y[i - 1] + (h2 - h1) / (h1 * h2) * y[i] +
           h1 / (h2 * (h1 + h2)) * y[i + 1];
  }
  {
    const double h1 = t[1] - t[0], h2 = t[2] - t[1];
    d[0] = -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * y[0] + (h1 + h2) / (h1 * h2) * y[1] -
           h1 / (h2 * (h1 + h2)) * y[2];
  }
  {
    const double h2 = t[n - 1] - t[n - 2], h1 = t[n - 2] - t[n - 3];
    d[n - 1] = (2.0 * h2 + h1) / (h2 * (h1 + h2)) * y[n - 1] - (h1 + h2) / (h1 * h2) * y[n - 2] +
               h2 / (h1 * (h1 + h2)) * y[n - 3];
  }
  return d;
}

std::vector<double> energy_balance_residual(const NormTrace& trace, double nu) {
  if (trace.size() < 2) throw ShapeError("energy balance needs at least 2 samples");
  std::vector<double> t, e;
  for (const auto& s : trace.samples()) {
    t.push_back(s.t);
    e.push_back(s.l2_sq);
  }
  const auto de = differentiate(t, e);
  std::vector<double> r(t.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const auto& s = trace.samples()[i];
    r[i] = 0.5 * de[i] + nu * s.h1_sq - s.f_dot_u;
  }
  return r;
}

}  // namespace nsreg
