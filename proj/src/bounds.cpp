#include "nsreg/bounds.hpp"

#include <cmath>
#include <string>

#include "nsreg/errors.hpp"

namespace nsreg {
namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ConfigError(std::string(name) + " must be positive and finite");
  }
}

void require_non_negative(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(name) + " must be non-negative and finite");
  }
}

CriterionReport make_report(CriterionKind kind, double lhs, double horizon) {
  CriterionReport r{kind, lhs, kHalfPi, lhs < kHalfPi, kHalfPi - lhs, std::nullopt, horizon};
  const BoundKind bound_kind = kind == CriterionKind::steady           ? BoundKind::arctan_steady
                               : kind == CriterionKind::time_dependent ? BoundKind::arctan_timedep
                                                                       : BoundKind::arctan_free;
  if (r.satisfied) r.bound = BoundCurve::constant(bound_kind, std::tan(lhs), horizon);
  return r;
}

}  // namespace

// ---------------------------------------------------------------- ledger

double default_embedding_constant() { return std::pow(2048.0 / 27.0, 0.125); }
double default_interpolation_constant() { return std::pow(2048.0 / 27.0, 0.125); }

ConstantLedger derive_constants(double nu, double lambda1, double embedding, double interpolation) {
  require_positive(nu, "viscosity");
  require_positive(lambda1, "first Stokes eigenvalue");
  require_positive(embedding, "embedding constant");
  require_positive(interpolation, "interpolation constant");
  ConstantLedger l{};
  l.nu = nu;
  l.lambda1 = lambda1;
  l.embedding = embedding;
  l.interpolation = interpolation;
  l.c3 = 1.0 / (2.0 * nu);
  l.c5 = embedding * interpolation;
  const double c5_sq = l.c5 * l.c5;
  l.c6 = 27.0 * (c5_sq * c5_sq) / (32.0 * nu * nu * nu);
  l.c7 = 1.0 / (2.0 * nu * lambda1);
  l.c9 = l.c6 / nu;
  l.c11 = l.c6 / nu;
  l.c8 = l.c3 + 2.0 * l.c6 * l.c7 / nu;
  l.c10 = l.c8;
  l.c12 = l.c6;
  l.c1 = l.c6 * (nu * nu * nu);
  l.enstrophy_integral = 1.0 / nu;
  return l;
}

ConstantLedger default_ledger(double nu, double lambda1) {
  return derive_constants(nu, lambda1, default_embedding_constant(), default_interpolation_constant());
}

double ConstantLedger::k_forced(double f_norm) const noexcept {
  return 2.0 * f_norm * f_norm / nu + c1 / (nu * nu * nu);
}

nlohmann::json ConstantLedger::to_json() const {
  auto entry = [](double v, const char* alias) { return nlohmann::json{{"value", v}, {"symbol", alias}}; };
  return nlohmann::json{
      {"nu", entry(nu, "nu")},
      {"lambda1", entry(lambda1, "lambda_1")},
      {"embedding_constant", entry(embedding, "C_S")},
      {"interpolation_constant", entry(interpolation, "C_I")},
      {"forcing_young", entry(c3, "c3")},
      {"nonlinear_hoelder", entry(c5, "c5")},
      {"enstrophy_growth", entry(c6, "c6")},
      {"energy_forcing", entry(c7, "c7")},
      {"steady_forcing_weight", entry(c8, "c8")},
      {"steady_energy_weight", entry(c9, "c9")},
      {"enstrophy_integral", entry(enstrophy_integral, "c9 (integral bound)")},
      {"forcing_integral_weight", entry(c10, "c10")},
      {"energy_weight", entry(c11, "c11")},
      {"riccati_rate", entry(c12, "c12")},
      {"classical_nonlinear", entry(c1, "c1")},
  };
}

// ------------------------------------------------------------ bound curves

const char* to_string(BoundKind kind) noexcept {
  switch (kind) {
    case BoundKind::classical_forced: return "classical_forced";
    case BoundKind::classical_free: return "classical_free";
    case BoundKind::arctan_steady: return "arctan_steady";
    case BoundKind::arctan_timedep: return "arctan_timedep";
    case BoundKind::arctan_free: return "arctan_free";
  }
  return "unknown";
}

BoundCurve BoundCurve::classical_forced(double h1_sq0, double f_norm, const ConstantLedger& ledger) {
  require_non_negative(h1_sq0, "initial enstrophy");
  require_non_negative(f_norm, "force norm");
  const double grow = 1.0 + std::sqrt(h1_sq0);
  const double rate = ledger.k_forced(f_norm) * grow * grow;
  BoundCurve c(BoundKind::classical_forced, 1.0 / rate);
  c.y0_ = h1_sq0;
  c.rate_ = rate;
  return c;
}

BoundCurve BoundCurve::classical_free(double h1_sq0, const ConstantLedger& ledger) {
  require_non_negative(h1_sq0, "initial enstrophy");
  const double rate = 2.0 * ledger.c12 * h1_sq0 * h1_sq0;
  BoundCurve c(BoundKind::classical_free, rate > 0.0 ? 1.0 / rate : kInfinity);
  c.y0_ = h1_sq0;
  c.rate_ = rate;
  return c;
}

BoundCurve BoundCurve::constant(BoundKind kind, double value, double horizon) {
  if (kind == BoundKind::classical_forced || kind == BoundKind::classical_free) {
    throw UsageError("classical bounds are not constant in time");
  }
  BoundCurve c(kind, horizon);
  c.value_ = value;
  return c;
}

bool BoundCurve::valid_at(double t) const noexcept {
  if (!(t >= 0.0)) return false;
  if (kind_ == BoundKind::classical_forced || kind_ == BoundKind::classical_free) return t < horizon_;
  return t <= horizon_;
}

double BoundCurve::operator()(double t) const {
  if (!(t >= 0.0)) throw DomainError("bounds are defined for t >= 0");
  if (!valid_at(t)) {
    throw HorizonExceeded(std::string(to_string(kind_)) + " bound evaluated beyond its horizon", horizon_);
  }
  switch (kind_) {
    case BoundKind::classical_forced:
      return (1.0 + y0_) / std::sqrt(1.0 - rate_ * t);
    case BoundKind::classical_free:
      return y0_ / std::sqrt(1.0 - rate_ * t);
    default:
      return value_;
  }
}

double classical_bound_forced(double t, double h1_sq0, double f_norm, const ConstantLedger& ledger) {
  return BoundCurve::classical_forced(h1_sq0, f_norm, ledger)(t);
}

double classical_horizon_forced(double h1_sq0, double f_norm, const ConstantLedger& ledger) {
  return 1.0 / (ledger.k_forced(f_norm) * (1.0 + h1_sq0));
}

double classical_bound_free(double t, double h1_sq0, const ConstantLedger& ledger) {
  return BoundCurve::classical_free(h1_sq0, ledger)(t);
}

double classical_horizon_free(double h1_sq0, double nu) {
  if (h1_sq0 == 0.0) return kInfinity;
  return nu * nu * nu / (128.0 * h1_sq0 * h1_sq0);
}

// -------------------------------------------------------------- criteria

const char* to_string(CriterionKind kind) noexcept {
  switch (kind) {
    case CriterionKind::steady: return "steady";
    case CriterionKind::time_dependent: return "time_dependent";
    case CriterionKind::force_free: return "force_free";
  }
  return "unknown";
}

void CriterionInput::validate(double lambda1) const {
  require_non_negative(l2_norm, "||u0||");
  require_non_negative(h1_sq, "||u0||_1^2");
  require_non_negative(f_norm, "||f||");
  require_non_negative(int_f_sq, "int ||f||^2");
  const double floor = lambda1 * l2_norm * l2_norm;
  if (h1_sq < floor * (1.0 - 1e-12)) {
    throw DomainError("inconsistent norms: ||u0||_1^2 < lambda1 ||u0||^2 violates Poincare");
  }
}

CriterionReport arctan_bound_steady(double T, const CriterionInput& in, const ConstantLedger& ledger) {
  in.validate(ledger.lambda1);
  if (!(T >= 0.0)) throw DomainError("time horizon must be non-negative");
  const double force = in.f_norm == 0.0 ? 0.0 : ledger.c8 * T * (in.f_norm * in.f_norm);
  const double lhs = force + ledger.c9 * (in.l2_norm * in.l2_norm) + std::atan(in.h1_sq);
  return make_report(CriterionKind::steady, lhs, T);
}

CriterionReport arctan_bound_timedep(double T, const CriterionInput& in, const ConstantLedger& ledger) {
  in.validate(ledger.lambda1);
  if (!(T >= 0.0)) throw DomainError("time horizon must be non-negative");
  const double lhs =
      ledger.c10 * in.int_f_sq + ledger.c11 * (in.l2_norm * in.l2_norm) + std::atan(in.h1_sq);
  return make_report(CriterionKind::time_dependent, lhs, T);
}

CriterionReport arctan_bound_free(const CriterionInput& in, const ConstantLedger& ledger) {
  in.validate(ledger.lambda1);
  const double lhs = ledger.c11 * (in.l2_norm * in.l2_norm) + std::atan(in.h1_sq);
  return make_report(CriterionKind::force_free, lhs, kInfinity);
}

nlohmann::json json_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

nlohmann::json to_json(const CriterionReport& r, std::span<const double> sample_times) {
  nlohmann::json bound_at = nlohmann::json::array();
  if (r.bound) {
    for (double t : sample_times) {
      if (r.bound->valid_at(t)) bound_at.push_back({{"t", t}, {"value", json_number((*r.bound)(t))}});
    }
  }
  return nlohmann::json{{"kind", to_string(r.kind)},
                        {"lhs", json_number(r.lhs)},
                        {"threshold", r.threshold},
                        {"satisfied", r.satisfied},
                        {"margin", json_number(r.margin)},
                        {"bound_at", bound_at},
                        {"horizon", json_number(r.horizon)}};
}

nlohmann::json to_json(const CriterionReport& r) {
  std::vector<double> times;
  if (std::isfinite(r.horizon)) {
    for (int i = 0; i <= 4; ++i) times.push_back(r.horizon * i / 4.0);
  } else {
    times = {0.0, 1.0, 10.0, 100.0};
  }
  return to_json(r, times);
}

// ------------------------------------------------------------ comparison

ComparisonTable interval_comparison(double h1_sq, std::span<const double> l2_sweep,
                                    const ConstantLedger& ledger, double horizon_fraction) {
  if (!(horizon_fraction > 0.0 && horizon_fraction <= 1.0)) {
    throw DomainError("horizon fraction must lie in (0, 1]");
  }
  ComparisonTable table{h1_sq, ledger.nu, horizon_fraction, {}, std::nullopt};
  const double nu3 = ledger.nu * ledger.nu * ledger.nu;
  const double horizon = classical_horizon_free(h1_sq, ledger.nu);
  for (double l2 : l2_sweep) {
    CriterionInput in;
    in.l2_norm = l2;
    in.h1_sq = h1_sq;
    in.validate(ledger.lambda1);
    const auto free = arctan_bound_free(in, ledger);
    ComparisonRow row{};
    row.l2_norm = l2;
    row.classical_horizon = horizon;
    row.lhs_free = free.lhs;
    row.certified_free = free.satisfied;
    const double t_star = horizon_fraction * horizon;
    const double printed_arg = std::isinf(t_star) ? 0.0 : std::sqrt(nu3 / (128.0 * t_star));
    row.lhs_printed = ledger.c11 * (l2 * l2) + std::atan(printed_arg);
    row.certified_printed = row.lhs_printed < kHalfPi;
    row.extends_classical = row.certified_free && std::isfinite(horizon);
    table.rows.push_back(row);
  }
  const double room = kHalfPi - std::atan(h1_sq);
  if (room > 0.0) table.threshold_l2 = std::sqrt(room / ledger.c11);
  return table;
}

}  // namespace nsreg
