#include "nsreg/ode_oracle.hpp"

#include <array>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

#include "nsreg/errors.hpp"

namespace nsreg {
namespace {

using State = std::array<double, 2>;  // y, int y
namespace odeint = boost::numeric::odeint;

struct Model {
  ComparisonOde ode;
  double alpha;
  double beta;

  double rate(double y) const {
    return ode == ComparisonOde::cubic ? alpha + beta * y * y * y : beta * y * (1.0 + y * y);
  }
  // |dw/dt| for w = y^-2; strictly positive.
  double inverse_speed(double w) const {
    return ode == ComparisonOde::cubic ? 2.0 * (alpha * w * std::sqrt(w) + beta) : 2.0 * beta * (1.0 + w);
  }
};

// Integrands are analytic on [a, b]; shallow bisection suffices.
double integrate(const auto& f, double a, double b) {
  if (a == b) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 6, 1e-14);
}

}  // namespace

OracleResult ode_comparison_oracle(ComparisonOde ode, double alpha, double beta, double y0,
                                   double t_end, const OracleOptions& options) {
  if (!(alpha >= 0.0) || !(beta > 0.0) || !(y0 >= 0.0) || !(t_end > 0.0)) {
    throw DomainError("oracle needs alpha >= 0, beta > 0, y0 >= 0 and t_end > 0");
  }
  const Model model{ode, ode == ComparisonOde::cubic ? alpha : 0.0, beta};
  OracleResult result;
  result.trajectory.push_back({0.0, y0, 0.0});
  if (model.rate(y0) == 0.0) {
    // Equilibrium at zero.
    result.trajectory.push_back({t_end, y0, y0 * t_end});
    return result;
  }

  // Leg 1: y itself.
  auto system = [&model](const State& x, State& dxdt, double) {
    dxdt[0] = model.rate(x[0]);
    dxdt[1] = x[0];
  };
  auto stepper = odeint::make_controlled(options.absolute_tolerance, options.relative_tolerance,
                                         odeint::runge_kutta_dopri5<State>());
  State x{y0, 0.0};
  double t = 0.0;
  double h = std::min(1e-3, t_end) / std::max(1.0, model.rate(y0));
  const double y_switch = std::max(options.inverse_switch, y0);
  while (x[0] < y_switch && t < t_end) {
    double trial = std::min(h, t_end - t);
    const double t_before = t;
    const auto outcome = stepper.try_step(system, x, t, trial);
    if (outcome == odeint::fail) {
      h = trial;
      // Step-size collapse: the solution is escaping faster than we can follow.
      if (h < 1e-15 * std::max(1.0, t)) break;
      continue;
    }
    h = trial;
    if (!std::isfinite(x[0])) throw NumericalBlowup("oracle state became non-finite", t_before);
    result.trajectory.push_back({t, x[0], x[1]});
  }
  if (t >= t_end) return result;

  // Leg 2: w = 1/y^2 runs from w_s down to 0 at the blowup time.
  const double w_switch = 1.0 / (x[0] * x[0]);
  const double t_switch = t;
  const double int_switch = x[1];
  auto dt_dw = [&model](double w) { return 1.0 / model.inverse_speed(w); };
  auto dint_dw = [&model](double w) { return 1.0 / (std::sqrt(w) * model.inverse_speed(w)); };
  const double remaining = integrate(dt_dw, 0.0, w_switch);
  const double blowup = t_switch + remaining;

  auto time_at = [&](double w) { return t_switch + integrate(dt_dw, w, w_switch); };
  auto push_sample = [&](double w, double time) {
    result.trajectory.push_back({time, 1.0 / std::sqrt(w), int_switch + integrate(dint_dw, w, w_switch)});
  };

  double w_end = 0.0;
  if (blowup > t_end) {
    // Solve time_at(w) = t_end for the final state.
    auto residual = [&](double w) { return time_at(w) - t_end; };
    boost::uintmax_t iterations = 200;
    const auto bracket = boost::math::tools::toms748_solve(
        residual, 0.0, w_switch, boost::math::tools::eps_tolerance<double>(50), iterations);
    w_end = 0.5 * (bracket.first + bracket.second);
  }
  for (int i = 1; i < options.inverse_samples; ++i) {
    const double w = w_switch - (w_switch - w_end) * i / options.inverse_samples;
    if (w <= 0.0) break;
    push_sample(w, time_at(w));
  }
  if (blowup > t_end) {
    push_sample(w_end, t_end);
  } else {
    result.blowup_time = blowup;
  }
  return result;
}

}  // namespace nsreg
