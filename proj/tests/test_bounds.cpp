#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "nsreg/bounds.hpp"
#include "nsreg/errors.hpp"

using namespace nsreg;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {

// Ledger entries recomputed in 50-digit arithmetic from the same inputs.
struct BigLedger {
  Big c3, c6, c7, c8, c11;
};

BigLedger big_ledger(double nu, double lambda1, double cs, double ci) {
  const Big n(nu), l(lambda1), c5 = Big(cs) * Big(ci);
  BigLedger b;
  b.c3 = 1 / (2 * n);
  b.c6 = 27 * pow(c5, 4) / (32 * pow(n, 3));
  b.c7 = 1 / (2 * n * l);
  b.c8 = b.c3 + 2 * b.c6 * b.c7 / n;
  b.c11 = b.c6 / n;
  return b;
}

}  // namespace

TEST_CASE("default calibration pins c6 = 64 / nu^3") {
  const auto l = default_ledger(1.0);
  CHECK(l.c6 == doctest::Approx(64.0).epsilon(1e-14));
  CHECK(2.0 * l.c6 == doctest::Approx(128.0).epsilon(1e-14));
  const auto l2 = default_ledger(2.0);
  CHECK(l2.c3 == 0.25);
  CHECK(l2.c7 == 0.25);
  const auto doubled = derive_constants(1.0, 1.0, 2.0 * default_embedding_constant(),
                                        default_interpolation_constant());
  CHECK(doubled.c6 / l.c6 == doctest::Approx(16.0).epsilon(1e-14));
}

TEST_CASE("ledger identities hold bit for bit") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uni(0.1, 5.0);
  for (int i = 0; i < 50; ++i) {
    const double nu = uni(rng), lam = uni(rng), cs = uni(rng), ci = uni(rng);
    const auto l = derive_constants(nu, lam, cs, ci);
    const double c5 = cs * ci;
    CHECK(l.c5 == c5);
    CHECK(l.c3 == 1.0 / (2.0 * nu));
    CHECK(l.c6 == 27.0 * ((c5 * c5) * (c5 * c5)) / (32.0 * nu * nu * nu));
    CHECK(l.c7 == 1.0 / (2.0 * nu * lam));
    CHECK(l.c9 == l.c6 / nu);
    CHECK(l.c11 == l.c6 / nu);
    CHECK(l.c8 == l.c3 + 2.0 * l.c6 * l.c7 / nu);
    CHECK(l.c10 == l.c8);
    CHECK(l.c12 == l.c6);
    CHECK(l.c1 == l.c6 * (nu * nu * nu));
    for (double v : {l.c1, l.c3, l.c5, l.c6, l.c7, l.c8, l.c9, l.c10, l.c11, l.c12}) CHECK(v > 0.0);
  }
  CHECK_THROWS_AS(derive_constants(0.0, 1.0, 1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(derive_constants(1.0, -1.0, 1.0, 1.0), ConfigError);
}

TEST_CASE("ledger JSON carries internal names and symbols") {
  const auto j = default_ledger(1.0).to_json();
  CHECK(j["enstrophy_growth"]["symbol"] == "c6");
  CHECK(j["energy_weight"]["symbol"] == "c11");
  CHECK(j["steady_energy_weight"]["symbol"] == "c9");
}

TEST_CASE("classical forced bound") {
  const auto l = default_ledger(1.0);
  CHECK(classical_bound_forced(0.0, 0.7, 0.3, l) == 1.7);
  CHECK(classical_bound_forced(0.0, 0.0, 0.0, l) == 1.0);
  // K = 2 + 64 = 66
  CHECK(l.k_forced(1.0) == doctest::Approx(66.0).epsilon(1e-14));
  CHECK(classical_horizon_forced(1.0, 1.0, l) == doctest::Approx(1.0 / 132.0).epsilon(1e-14));
  CHECK(classical_horizon_forced(0.0, 0.0, l) == doctest::Approx(1.0 / 64.0).epsilon(1e-14));
  CHECK(classical_horizon_forced(1e12, 1.0, l) < 1e-13);
  // The bound itself is finite only while K t (1 + ||u0||_1)^2 < 1, i.e. t < 1/264.
  CHECK(std::isfinite(classical_bound_forced(0.999 / 264.0, 1.0, 1.0, l)));
  try {
    classical_bound_forced(1.0 / 132.0, 1.0, 1.0, l);
    FAIL("expected HorizonExceeded");
  } catch (const HorizonExceeded& e) {
    CHECK(e.horizon() == doctest::Approx(1.0 / 264.0).epsilon(1e-14));
  }
}

TEST_CASE("classical force-free bound and horizon") {
  const auto l = default_ledger(1.0);
  CHECK(classical_bound_free(0.0, 0.8, l) == 0.8);
  CHECK(classical_horizon_free(1.0, 1.0) == 1.0 / 128.0);
  CHECK(classical_horizon_free(0.5, 2.0) == 8.0 / (128.0 * 0.25));
  CHECK(std::isinf(classical_horizon_free(0.0, 1.0)));
  const auto curve = BoundCurve::classical_free(1.0, l);
  CHECK(curve.horizon() == doctest::Approx(1.0 / 128.0).epsilon(1e-14));
  CHECK_THROWS_AS(curve(curve.horizon()), HorizonExceeded);
  CHECK_THROWS_AS(curve(1.0), HorizonExceeded);
  // y^2 = y0^2 / (1 - 2 c12 t y0^2)
  const double t = 0.5 / 128.0;
  CHECK(curve(t) == doctest::Approx(1.0 / std::sqrt(1.0 - 128.0 * t)).epsilon(1e-13));
}

TEST_CASE("steady criterion") {
  const auto l = default_ledger(1.0);
  SUBCASE("no force and no energy reduces to tan(arctan y0)") {
    const auto r = arctan_bound_steady(5.0, {0.0, 2.5, 0.0, 0.0}, l);
    CHECK(r.satisfied);
    CHECK((*r.bound)(5.0) == doctest::Approx(2.5).epsilon(1e-14));
  }
  SUBCASE("matches extended-precision evaluation") {
    const CriterionInput in{0.05, 1.0, 0.01, 0.0};
    const auto r = arctan_bound_steady(1.0, in, l);
    const auto b = big_ledger(1.0, 1.0, default_embedding_constant(), default_interpolation_constant());
    const Big lhs = b.c8 * Big(1.0) * Big(0.01) * Big(0.01) + b.c6 / 1 * Big(0.05) * Big(0.05) + atan(Big(1.0));
    CHECK(std::abs(r.lhs - static_cast<double>(lhs)) <= 1e-15 * r.lhs);
    CHECK(r.lhs == doctest::Approx(0.951848163397448).epsilon(1e-13));
    CHECK(r.satisfied);
    CHECK(r.margin == doctest::Approx(kHalfPi - r.lhs).epsilon(1e-15));
    CHECK_THROWS_AS((*r.bound)(1.5), HorizonExceeded);
  }
  SUBCASE("large data is not certified") {
    const auto r = arctan_bound_steady(1.0, {10.0, 1e3, 0.0, 0.0}, l);
    CHECK_FALSE(r.satisfied);
    CHECK_FALSE(r.bound.has_value());
    CHECK(r.margin < 0.0);
  }
}

TEST_CASE("time-dependent criterion") {
  const auto l = default_ledger(1.0);
  const CriterionInput in{0.0, 1.0, 0.0, 0.1};
  const auto r = arctan_bound_timedep(kInfinity, in, l);
  const auto b = big_ledger(1.0, 1.0, default_embedding_constant(), default_interpolation_constant());
  const Big lhs = b.c8 * Big(0.1) + atan(Big(1.0));
  CHECK(std::abs(r.lhs - static_cast<double>(lhs)) <= 1e-15 * r.lhs);
  CHECK_FALSE(r.satisfied);

  const CriterionInput zero_force{0.1, 0.5, 0.0, 0.0};
  const auto td = arctan_bound_timedep(3.0, zero_force, l);
  const auto fr = arctan_bound_free(zero_force, l);
  CHECK(td.lhs == fr.lhs);
  CHECK(td.satisfied == fr.satisfied);

  const double T = 2.0, f = 0.003;
  const auto steady = arctan_bound_steady(T, {0.02, 0.3, f, 0.0}, l);
  const auto timedep = arctan_bound_timedep(T, {0.02, 0.3, 0.0, T * f * f}, l);
  CHECK(steady.lhs == doctest::Approx(timedep.lhs).epsilon(1e-15));
}

TEST_CASE("force-free criterion") {
  const auto l = default_ledger(1.0);
  const auto zero = arctan_bound_free({0.0, 3.0, 0.0, 0.0}, l);
  CHECK(zero.satisfied);
  CHECK((*zero.bound)(1e9) == doctest::Approx(3.0).epsilon(1e-14));

  const auto r = arctan_bound_free({0.1, 0.5, 0.0, 0.0}, l);
  const Big lhs = Big(64) * Big(0.1) * Big(0.1) + atan(Big(0.5));
  CHECK(r.lhs == doctest::Approx(static_cast<double>(lhs)).epsilon(1e-13));
  CHECK(r.lhs == doctest::Approx(1.1036).epsilon(1e-4));
  CHECK(r.satisfied);
  CHECK((*r.bound)(100.0) == doctest::Approx(static_cast<double>(tan(lhs))).epsilon(1e-12));
  CHECK((*r.bound)(0.0) == doctest::Approx(1.984).epsilon(1e-3));
  CHECK(std::isinf(r.bound->horizon()));

  CHECK_FALSE(arctan_bound_free({0.16, 1.0, 0.0, 0.0}, l).satisfied);
  CHECK_THROWS_AS(arctan_bound_free({2.0, 1.0, 0.0, 0.0}, l), DomainError);
}

TEST_CASE("criterion left-hand sides are monotone") {
  const auto l = default_ledger(0.8, 1.3);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double l2 = 0.1 * uni(rng), f = uni(rng), T = 1.0 + uni(rng);
    const double y = 1.3 * l2 * l2 + uni(rng);
    const CriterionInput base{l2, y, f, f * f * T};
    const double s = arctan_bound_steady(T, base, l).lhs;
    const double d = arctan_bound_timedep(T, base, l).lhs;
    CHECK(arctan_bound_steady(T * 1.01, base, l).lhs > s);
    CHECK(arctan_bound_steady(T, {l2, y, f * 1.01 + 1e-9, 0.0}, l).lhs > s);
    CHECK(arctan_bound_steady(T, {l2 * 1.01 + 1e-9, y * 1.03 + 1e-9, f, 0.0}, l).lhs > s);
    CHECK(arctan_bound_steady(T, {l2, y * 1.01 + 1e-9, f, 0.0}, l).lhs > s);
    CHECK(arctan_bound_timedep(T, {l2, y, f, base.int_f_sq * 1.01 + 1e-9}, l).lhs > d);
    const auto a = arctan_bound_free({l2, y, 0, 0}, l);
    const auto b = arctan_bound_free({l2 * 0.5, y, 0, 0}, l);
    if (a.satisfied) {
      REQUIRE(b.satisfied);
      CHECK((*b.bound)(0.0) <= (*a.bound)(0.0));
    }
  }
}

TEST_CASE("every bound starts at or above the initial enstrophy") {
  const auto l = default_ledger(1.0);
  for (double y0 : {0.0, 0.1, 1.0, 7.0}) {
    const double l2 = std::sqrt(y0) * 0.01;
    CHECK(classical_bound_forced(0.0, y0, 0.2, l) >= y0);
    if (y0 > 0.0) CHECK(classical_bound_free(0.0, y0, l) >= y0);
    const auto s = arctan_bound_steady(0.5, {l2, y0, 0.001, 0.0}, l);
    if (s.satisfied) CHECK((*s.bound)(0.0) >= y0);
    const auto f = arctan_bound_free({0.0, y0, 0.0, 0.0}, l);
    CHECK((*f.bound)(0.0) == doctest::Approx(y0).epsilon(1e-13));
  }
}

TEST_CASE("report JSON schema") {
  const auto l = default_ledger(1.0);
  const auto j = to_json(arctan_bound_free({0.0, 1.0, 0.0, 0.0}, l));
  CHECK(j["kind"] == "force_free");
  CHECK(j["satisfied"] == true);
  CHECK(j["horizon"] == "inf");
  CHECK(j["bound_at"].size() == 4);
  CHECK(j["threshold"].get<double>() == kHalfPi);
  const auto k = to_json(arctan_bound_free({0.2, 1.0, 0.0, 0.0}, l));
  CHECK(k["satisfied"] == false);
  CHECK(k["bound_at"].empty());
}

TEST_CASE("interval comparison") {
  const auto l = default_ledger(1.0);
  SUBCASE("sweep at fixed unit enstrophy") {
    const std::vector<double> sweep{1.0, 0.1, 0.01};
    const auto table = interval_comparison(1.0, sweep, l);
    REQUIRE(table.rows.size() == 3);
    CHECK_FALSE(table.rows[0].certified_free);
    CHECK(table.rows[1].certified_free);
    CHECK(table.rows[2].certified_free);
    for (const auto& row : table.rows) {
      CHECK(row.classical_horizon == 1.0 / 128.0);
      CHECK(row.extends_classical == row.certified_free);
      CHECK(row.lhs_printed == doctest::Approx(row.lhs_free).epsilon(1e-15));
    }
    REQUIRE(table.threshold_l2.has_value());
    const Big threshold = sqrt((boost::math::constants::pi<Big>() / 4) / Big(l.c11));
    CHECK(*table.threshold_l2 == doctest::Approx(static_cast<double>(threshold)).epsilon(1e-14));
    CHECK(*table.threshold_l2 == doctest::Approx(0.1108).epsilon(1e-3));
  }
  SUBCASE("zero data") {
    const std::vector<double> sweep{0.0};
    const auto table = interval_comparison(0.0, sweep, l);
    CHECK(std::isinf(table.rows[0].classical_horizon));
    CHECK(table.rows[0].certified_free);
    CHECK_FALSE(table.rows[0].extends_classical);
  }
  SUBCASE("incompatible sweep") {
    const std::vector<double> sweep{1.5};
    CHECK_THROWS_AS(interval_comparison(1.0, sweep, l), DomainError);
  }
  SUBCASE("printed form with a shorter T* is stricter") {
    const std::vector<double> sweep{0.1};
    const auto table = interval_comparison(1.0, sweep, l, 0.5);
    CHECK(table.rows[0].lhs_printed > table.rows[0].lhs_free);
  }
}
