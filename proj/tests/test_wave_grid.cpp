#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "nsreg/errors.hpp"
#include "nsreg/wave_grid.hpp"

using namespace nsreg;

TEST_CASE("grid of 4 points per axis spans wavenumbers -2..1") {
  const auto grid = WaveGrid::make(4, 2.0 * std::numbers::pi);
  std::set<int> seen;
  for (int i = 0; i < 4; ++i) seen.insert(grid.wavenumber(i));
  CHECK(seen == std::set<int>{-2, -1, 0, 1});
}

TEST_CASE("grid of 8 points per axis has 512 modes") {
  CHECK(WaveGrid::make(8).size() == 512);
}

TEST_CASE("period pi doubles every wavevector") {
  const auto grid = WaveGrid::make(6, std::numbers::pi);
  CHECK(grid.scale() == doctest::Approx(2.0).epsilon(1e-15));
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const auto k = grid.mode(idx);
    for (int a = 0; a < 3; ++a) {
      const double ratio = grid.kappa(a, idx) / 2.0;
      CHECK(ratio == doctest::Approx(k[a]).epsilon(1e-15));
    }
  }
}

TEST_CASE("layout is a bijection onto the lattice box") {
  const auto grid = WaveGrid::make(6);
  std::set<std::array<int, 3>> modes;
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const auto k = grid.mode(idx);
    for (int a = 0; a < 3; ++a) {
      CHECK(k[a] >= -3);
      CHECK(k[a] < 3);
    }
    CHECK(grid.flat(k) == idx);
    modes.insert(k);
  }
  CHECK(modes.size() == grid.size());
}

TEST_CASE("conjugate index maps k to -k") {
  const auto grid = WaveGrid::make(8);
  const auto idx = grid.flat(1, -2, 3);
  CHECK(grid.mode(grid.conjugate(idx)) == std::array<int, 3>{-1, 2, -3});
}

TEST_CASE("dealias band keeps 3*kmax < N") {
  CHECK(WaveGrid::make(16).dealias_cutoff() == 5);
  CHECK(WaveGrid::make(32).dealias_cutoff() == 10);
  CHECK(WaveGrid::make(12).dealias_cutoff() == 3);
}

TEST_CASE("invalid configuration is rejected") {
  CHECK_THROWS_AS(WaveGrid::make(5), ConfigError);
  CHECK_THROWS_AS(WaveGrid::make(2), ConfigError);
  CHECK_THROWS_AS(WaveGrid::make(8, 0.0), ConfigError);
  CHECK_THROWS_AS(WaveGrid::make(8, -1.0), ConfigError);
}
