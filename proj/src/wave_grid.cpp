#include "nsreg/wave_grid.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "nsreg/errors.hpp"

namespace nsreg {

WaveGrid WaveGrid::make(int n, double length) {
  if (n < 4 || n % 2 != 0) {
    throw ConfigError("grid resolution must be even and at least 4, got " + std::to_string(n));
  }
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw ConfigError("domain period must be positive and finite");
  }
  return WaveGrid(n, length);
}

WaveGrid::WaveGrid(int n, double length)
    : n_(n), length_(length), scale_(2.0 * std::numbers::pi / length) {
  auto tables = std::make_shared<Tables>();
  const std::size_t total = static_cast<std::size_t>(n) * n * n;
  for (auto& axis : tables->kappa) axis.resize(total);
  tables->k2.resize(total);
  tables->band.resize(total);
  const int cutoff = dealias_cutoff();
  for (std::size_t idx = 0; idx < total; ++idx) {
    const auto k = mode(idx);
    double k2 = 0.0;
    bool band = true;
    for (int a = 0; a < 3; ++a) {
      const double kappa = scale_ * k[a];
      tables->kappa[a][idx] = kappa;
      k2 += kappa * kappa;
      band = band && std::abs(k[a]) <= cutoff;
    }
    tables->k2[idx] = k2;
    tables->band[idx] = band ? 1 : 0;
  }
  tables_ = std::move(tables);
}

double WaveGrid::cell_volume() const noexcept {
  const double h = length_ / n_;
  return h * h * h;
}

std::array<int, 3> WaveGrid::mode(std::size_t flat) const noexcept {
  const auto n = static_cast<std::size_t>(n_);
  const int iz = static_cast<int>(flat % n);
  const int iy = static_cast<int>((flat / n) % n);
  const int ix = static_cast<int>(flat / (n * n));
  return {wavenumber(ix), wavenumber(iy), wavenumber(iz)};
}

std::size_t WaveGrid::flat(int kx, int ky, int kz) const noexcept {
  auto wrap = [this](int k) {
    const int r = k % n_;
    return static_cast<std::size_t>(r < 0 ? r + n_ : r);
  };
  const auto n = static_cast<std::size_t>(n_);
  return (wrap(kx) * n + wrap(ky)) * n + wrap(kz);
}

std::size_t WaveGrid::conjugate(std::size_t idx) const noexcept {
  const auto k = mode(idx);
  return flat(-k[0], -k[1], -k[2]);
}

bool WaveGrid::is_nyquist(std::size_t idx) const noexcept {
  const auto k = mode(idx);
  const int nyq = -n_ / 2;
  return k[0] == nyq || k[1] == nyq || k[2] == nyq;
}

}  // namespace nsreg
