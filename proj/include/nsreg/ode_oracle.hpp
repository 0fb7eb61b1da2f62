#pragma once

#include <optional>
#include <vector>

namespace nsreg {

/// Scalar comparison equations for the enstrophy y(t).
enum class ComparisonOde {
  cubic,            // y' = alpha + beta y^3
  damped_logistic,  // y' = beta y (1 + y^2); alpha is ignored
};

struct OracleSample {
  double t;
  double y;
  double integral_y;  // int_0^t y ds
};

struct OracleResult {
  std::vector<OracleSample> trajectory;
  /// Set when the solution leaves every bounded set before t_end.
  std::optional<double> blowup_time;
};

struct OracleOptions {
  double relative_tolerance = 1e-13;
  double absolute_tolerance = 1e-15;
  /// Switch to the inverse variable w = 1/y^2 once y exceeds this value.
  double inverse_switch = 1e2;
  /// Samples recorded along the inverse-variable leg.
  int inverse_samples = 32;
};

/// Adaptive Dormand-Prince integration in y while y is moderate, then in
/// w = 1/y^2, where dw/dt stays bounded away from zero so the blowup time is
/// a regular quadrature int dw / |w'|.
/// Requires alpha >= 0, beta > 0, y0 >= 0, t_end > 0.
OracleResult ode_comparison_oracle(ComparisonOde ode, double alpha, double beta, double y0,
                                   double t_end, const OracleOptions& options = {});

}  // namespace nsreg
