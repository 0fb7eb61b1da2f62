#pragma once

#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace nsreg {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
inline constexpr double kHalfPi = std::numbers::pi / 2.0;

/// Constants of the enstrophy estimate chain.
///
/// Two physical inputs, the L^6 embedding constant C_S and the gradient
/// interpolation constant C_I, determine everything else:
///
///   c3  = 1 / (2 nu)                     forcing term after Young
///   c5  = C_S C_I                        Hoelder + embedding + interpolation
///   c6  = 27 c5^4 / (32 nu^3)            cubic enstrophy growth rate
///   c7  = 1 / (2 nu lambda1)             forcing term of the energy estimate
///   c9  = c11 = c6 / nu                  weight of ||u0||^2
///   c8  = c10 = c3 + 2 c6 c7 / nu        weight of the forcing integral
///   c12 = c6,  c1 = c6 nu^3
///
/// `enstrophy_integral` (= 1/nu) is the factor in
/// int_0^T ||u||_1^2 <= (||u0||^2 + 2 c7 int_0^T ||f||^2) / nu.
struct ConstantLedger {
  double nu;
  double lambda1;
  double embedding;      // C_S
  double interpolation;  // C_I
  double c1, c3, c5, c6, c7, c8, c9, c10, c11, c12;
  double enstrophy_integral;

  /// K = 2 ||f||^2 / nu + c1 / nu^3
  double k_forced(double f_norm) const noexcept;

  /// Internal names together with the conventional c_i symbols.
  nlohmann::json to_json() const;
};

/// C_S = C_I = (2048/27)^(1/8), so that c6 = 64 / nu^3 and the classical
/// force-free horizon is nu^3 / (128 ||u0||_1^4).
double default_embedding_constant();
double default_interpolation_constant();

/// Throws ConfigError unless every input is positive and finite.
ConstantLedger derive_constants(double nu, double lambda1, double embedding, double interpolation);
ConstantLedger default_ledger(double nu, double lambda1 = 1.0);

enum class BoundKind { classical_forced, classical_free, arctan_steady, arctan_timedep, arctan_free };

const char* to_string(BoundKind kind) noexcept;

/// Upper bound on y(t) = ||u(t)||_1^2 together with its validity horizon.
class BoundCurve {
 public:
  /// (1 + y0) / sqrt(1 - K t (1 + sqrt y0)^2), finite while K t (1 + sqrt y0)^2 < 1.
  static BoundCurve classical_forced(double h1_sq0, double f_norm, const ConstantLedger& ledger);
  /// y0 / sqrt(1 - 2 c12 t y0^2), finite while 2 c12 t y0^2 < 1.
  static BoundCurve classical_free(double h1_sq0, const ConstantLedger& ledger);
  /// Time-independent value, valid on [0, horizon].
  static BoundCurve constant(BoundKind kind, double value, double horizon);

  BoundKind kind() const noexcept { return kind_; }
  /// Classical curves are infinite at the horizon; constant curves are valid up to and including it.
  double horizon() const noexcept { return horizon_; }
  bool valid_at(double t) const noexcept;
  /// Throws HorizonExceeded outside the validity interval and DomainError for t < 0.
  double operator()(double t) const;

 private:
  BoundCurve(BoundKind kind, double horizon) : kind_(kind), horizon_(horizon) {}

  BoundKind kind_;
  double horizon_;
  double y0_ = 0.0;
  double rate_ = 0.0;   // K (1 + sqrt y0)^2 or 2 c12 y0^2
  double value_ = 0.0;  // constant curves
};

double classical_bound_forced(double t, double h1_sq0, double f_norm, const ConstantLedger& ledger);
/// 1 / (K (1 + ||u0||_1^2)).
double classical_horizon_forced(double h1_sq0, double f_norm, const ConstantLedger& ledger);
double classical_bound_free(double t, double h1_sq0, const ConstantLedger& ledger);
/// nu^3 / (128 ||u0||_1^4); infinite for zero data.
double classical_horizon_free(double h1_sq0, double nu);

/// Scalar data entering the arctan criteria.
struct CriterionInput {
  double l2_norm = 0.0;   // ||u0||
  double h1_sq = 0.0;     // ||u0||_1^2
  double f_norm = 0.0;    // ||f|| (steady force)
  double int_f_sq = 0.0;  // int_0^T ||f||^2 (time-dependent force)

  /// Throws DomainError for negative or non-finite entries, or when
  /// h1_sq < lambda1 ||u0||^2 beyond rounding.
  void validate(double lambda1) const;
};

enum class CriterionKind { steady, time_dependent, force_free };

const char* to_string(CriterionKind kind) noexcept;

struct CriterionReport {
  CriterionKind kind;
  double lhs;
  double threshold = kHalfPi;
  /// lhs < pi/2, strictly.
  bool satisfied;
  double margin;
  /// Present exactly when satisfied: y(t) <= tan(lhs) on [0, horizon].
  std::optional<BoundCurve> bound;
  double horizon;
};

/// c8 T ||f||^2 + c9 ||u0||^2 + arctan ||u0||_1^2 < pi/2.
CriterionReport arctan_bound_steady(double T, const CriterionInput& in, const ConstantLedger& ledger);
/// c10 int_0^T ||f||^2 + c11 ||u0||^2 + arctan ||u0||_1^2 < pi/2; T may be infinite.
CriterionReport arctan_bound_timedep(double T, const CriterionInput& in, const ConstantLedger& ledger);
/// c11 ||u0||^2 + arctan ||u0||_1^2 < pi/2, certifying a bound for all t > 0.
CriterionReport arctan_bound_free(const CriterionInput& in, const ConstantLedger& ledger);

/// Report as {kind, lhs, threshold, satisfied, margin, bound_at: [{t, value}], horizon}.
/// Non-finite numbers are written as the strings "inf"/"nan".
nlohmann::json to_json(const CriterionReport& report, std::span<const double> sample_times);
/// Same, sampling the bound at a default set of times inside its horizon.
nlohmann::json to_json(const CriterionReport& report);

/// JSON number, or "inf" / "-inf" / "nan" for values JSON cannot hold.
nlohmann::json json_number(double v);

struct ComparisonRow {
  double l2_norm;
  double classical_horizon;  // nu^3 / (128 ||u0||_1^4)
  double lhs_free;           // c11 ||u0||^2 + arctan ||u0||_1^2
  bool certified_free;
  /// c11 ||u0||^2 + arctan sqrt(nu^3 / (128 T*)) with T* = horizon_fraction * classical_horizon.
  double lhs_printed;
  bool certified_printed;
  /// Certified globally although the classical horizon is finite.
  bool extends_classical;
};

struct ComparisonTable {
  double h1_sq;
  double nu;
  double horizon_fraction;
  std::vector<ComparisonRow> rows;
  /// ||u0|| below which the force-free criterion certifies, if any.
  std::optional<double> threshold_l2;
};

/// Classical horizon against the force-free criterion for fixed ||u0||_1^2
/// and a sweep of ||u0||. Throws DomainError when a sweep value violates
/// Poincare compatibility.
ComparisonTable interval_comparison(double h1_sq, std::span<const double> l2_sweep,
                                    const ConstantLedger& ledger, double horizon_fraction = 1.0);

}  // namespace nsreg
