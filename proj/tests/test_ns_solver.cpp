#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "nsreg/errors.hpp"
#include "nsreg/ns_solver.hpp"
#include "nsreg/trace_io.hpp"

using namespace nsreg;
using std::numbers::pi;

namespace {

double max_diff(const VectorField& a, const VectorField& b) {
  double d = 0.0;
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < a.grid().size(); ++i) d = std::max(d, std::abs(a.at(c, i) - b.at(c, i)));
  return d;
}

// Amplitude of u = a(t) sin y under f = cos(t) sin y, u(0) = 0, lambda = 1.
double forced_shear_amplitude(double nu, double t) {
  return (nu * std::cos(t) + std::sin(t) - nu * std::exp(-nu * t)) / (1.0 + nu * nu);
}

Forcing oscillating_shear(const WaveGrid& grid) {
  const auto base = shear_flow(grid);
  return Forcing::time_dependent([base](double t) {
    VectorField f = base.coefficients();
    f *= std::cos(t);
    return f;
  });
}

}  // namespace

TEST_CASE("one step of the shear flow is exact viscous decay") {
  const auto grid = WaveGrid::make(16);
  const auto u = shear_flow(grid);
  SolverConfig cfg;
  cfg.nu = 0.7;
  const double dt = 0.01;
  const auto next = step(u, Forcing::none(), 0.0, dt, cfg);
  const auto expected = u.scaled(std::exp(-cfg.nu * dt));
  CHECK(max_diff(next, expected) <= 1e-15);
}

TEST_CASE("from rest a steady force produces dt * Pf to first order") {
  const auto grid = WaveGrid::make(16);
  const auto f = random_divfree_field(grid, 9, -2.0, 1.0);
  SolverConfig cfg;
  for (double dt : {1e-2, 1e-3}) {
    const auto u = step(SpectralVelocity::zero(grid), Forcing::steady(f), 0.0, dt, cfg);
    const auto linear = f.scaled(dt);
    // The O(dt^2) remainder is bounded by nu |k|^2 dt^2 |f| / 2 plus B(u,u) = O(dt^2 |f|^2).
    CHECK(max_diff(u, linear) <= 30.0 * dt * dt * max_coefficient(f));
  }
}

TEST_CASE("Kolmogorov flow is stationary") {
  const auto grid = WaveGrid::make(16);
  SolverConfig cfg;
  cfg.nu = 0.5;
  cfg.dt = 0.01;
  cfg.t_end = 1.0;
  const auto f = shear_flow(grid);
  const auto u0 = shear_flow(grid, 1.0 / cfg.nu);
  const auto result = simulate(u0, Forcing::steady(f), cfg);
  CHECK(result.termination == Termination::completed);
  CHECK(max_diff(result.final_state, u0) <= 1e-10);

  const auto r = energy_balance_residual(result.trace, cfg.nu);
  for (std::size_t i = 0; i < r.size(); ++i) {
    const auto& s = result.trace.samples()[i];
    CHECK(std::abs(r[i]) <= 1e-9 * s.f_dot_u);
    CHECK(cfg.nu * s.h1_sq == doctest::Approx(s.f_dot_u).epsilon(1e-9));
  }
}

TEST_CASE("shear flow energy decays as exp(-2 nu t)") {
  const auto grid = WaveGrid::make(16);
  SolverConfig cfg;
  cfg.nu = 1.0;
  cfg.dt = 1e-3;
  cfg.t_end = 1.0;
  const auto result = simulate(shear_flow(grid), Forcing::none(), cfg);
  REQUIRE(result.termination == Termination::completed);
  CHECK(result.steps == 1000);
  CHECK(result.trace.back().t == 1.0);
  const double ratio = result.trace.back().l2_sq / result.trace.front().l2_sq;
  CHECK(std::abs(ratio - std::exp(-2.0)) <= 1e-6 * std::exp(-2.0));

  const auto r = energy_balance_residual(result.trace, cfg.nu);
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    worst = std::max(worst, std::abs(r[i]));
    scale = std::max(scale, cfg.nu * result.trace.samples()[i].h1_sq);
  }
  CHECK(worst <= 1e-4 * scale);
}

TEST_CASE("zero data gives an identically zero trace") {
  const auto grid = WaveGrid::make(8);
  SolverConfig cfg;
  cfg.dt = 0.1;
  const auto result = simulate(SpectralVelocity::zero(grid), Forcing::none(), cfg);
  CHECK(result.trace.size() == 11);
  for (const auto& s : result.trace.samples()) {
    CHECK(s.l2_sq == 0.0);
    CHECK(s.h1_sq == 0.0);
    CHECK(s.int_h1_sq == 0.0);
  }
  for (double r : energy_balance_residual(result.trace, cfg.nu)) CHECK(r == 0.0);
}

TEST_CASE("temporal convergence is fourth order") {
  const auto grid = WaveGrid::make(8);
  const double nu = 1.0, t_end = 1.0;
  const auto forcing = oscillating_shear(grid);
  const double exact = forced_shear_amplitude(nu, t_end) * std::sqrt(4.0 * pi * pi * pi);
  std::vector<double> errors;
  for (double dt : {0.1, 0.05, 0.025}) {
    SolverConfig cfg;
    cfg.nu = nu;
    cfg.dt = dt;
    cfg.t_end = t_end;
    const auto result = simulate(SpectralVelocity::zero(grid), forcing, cfg);
    errors.push_back(std::abs(std::sqrt(result.trace.back().l2_sq) - exact));
  }
  MESSAGE("errors: " << errors[0] << " " << errors[1] << " " << errors[2]);
  CHECK(errors[0] / errors[1] >= 16.0);
  CHECK(errors[1] / errors[2] >= 16.0);
}

TEST_CASE("unforced random flow loses energy and keeps its invariants") {
  const auto grid = WaveGrid::make(16);
  SolverConfig cfg;
  cfg.nu = 0.05;
  cfg.dt = 5e-3;
  cfg.t_end = 0.5;
  const auto u0 = random_divfree_field(grid, 4, -5.0 / 3.0, 20.0);
  const auto result = simulate(u0, Forcing::none(), cfg);
  REQUIRE(result.termination == Termination::completed);
  const auto& s = result.trace.samples();
  for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i].l2_sq <= s[i - 1].l2_sq * (1.0 + 1e-12));
  CHECK(relative_divergence(result.final_state) <= 1e-12);
  CHECK(std::abs(result.final_state.coefficients().at(0, 0)) == 0.0);
  CHECK(hermitian_defect(result.final_state) <= 1e-12);

  auto u = u0;
  for (int i = 0; i < 3; ++i) {
    u = step(u, Forcing::none(), i * cfg.dt, cfg.dt, cfg);
    CHECK(relative_divergence(u) <= 1e-12);
  }
}

TEST_CASE("violent data ends in a reported blowup, never in NaN") {
  const auto grid = WaveGrid::make(16);
  SolverConfig cfg;
  cfg.nu = 1e-3;
  cfg.dt = 0.5;
  cfg.t_end = 50.0;
  cfg.h1_ceiling = 1e8;
  const auto result = simulate(random_divfree_field(grid, 7, 0.0, 1e3), Forcing::none(), cfg);
  CHECK(result.termination == Termination::blowup);
  CHECK(result.last_valid_time < cfg.t_end);
  for (const auto& s : result.trace.samples()) {
    CHECK(std::isfinite(s.l2_sq));
    CHECK(std::isfinite(s.h1_sq));
  }
}

TEST_CASE("CFL controller shrinks the step for fast flows") {
  const auto grid = WaveGrid::make(16);
  SolverConfig cfg;
  cfg.nu = 0.1;
  cfg.dt = 0.1;
  cfg.t_end = 0.2;
  cfg.cfl = 0.5;
  const auto result = simulate(shear_flow(grid, 10.0), Forcing::none(), cfg);
  // max|u| = 10, dx = 2 pi / 16, so dt <= 0.0196
  CHECK(result.steps >= 10);
  CHECK(result.trace.back().t == doctest::Approx(0.2).epsilon(1e-15));
}

TEST_CASE("configuration and trace contracts") {
  SolverConfig cfg;
  cfg.nu = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.nu = 1.0;
  cfg.dt = -1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  NormTrace trace;
  CHECK_THROWS_AS(energy_balance_residual(trace, 1.0), ShapeError);
  trace.append({0.0, 1, 1, 1, 0, 0, 0, 0});
  CHECK_THROWS_AS(trace.append({0.0, 1, 1, 1, 0, 0, 0, 0}), UsageError);
  CHECK_THROWS_AS(energy_balance_residual(trace, 1.0), ShapeError);
}

TEST_CASE("trace CSV layout") {
  const auto grid = WaveGrid::make(8);
  SolverConfig cfg;
  cfg.dt = 0.5;
  const auto result = simulate(shear_flow(grid), Forcing::none(), cfg);
  std::ostringstream os;
  write_trace_csv(os, result.trace, cfg.nu);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "t,l2_sq,h1_sq,h2_sq,f_dot_u,int_h1_sq,int_f_sq,residual");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 3);
}

TEST_CASE("finite differences are exact for quadratics on uneven meshes") {
  const std::vector<double> t{0.0, 0.1, 0.35, 0.4, 1.0};
  std::vector<double> y;
  for (double s : t) y.push_back(3.0 * s * s - s + 2.0);
  const auto d = differentiate(t, y);
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(d[i] == doctest::Approx(6.0 * t[i] - 1.0).epsilon(1e-12));
}
