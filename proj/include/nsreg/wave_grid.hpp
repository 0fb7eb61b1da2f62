#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <numbers>
#include <vector>

namespace nsreg {

/// Integer lattice of Fourier modes on the periodic box [0, L)^3 sampled
/// with N points per axis.
///
/// Modes are stored in FFT order: index i along an axis carries the integer
/// wavenumber i for i < N/2 and i - N otherwise, so the stored box is
/// [-N/2, N/2)^3. The flat index is (ix * N + iy) * N + iz, which is also
/// the layout of physical samples.
class WaveGrid {
 public:
  /// Throws ConfigError unless n is even, n >= 4 and length > 0.
  static WaveGrid make(int n, double length = 2.0 * std::numbers::pi);

  int n() const noexcept { return n_; }
  double length() const noexcept { return length_; }
  /// 2*pi/L: converts integer wavenumbers to physical ones.
  double scale() const noexcept { return scale_; }
  std::size_t size() const noexcept { return tables_->k2.size(); }
  double cell_volume() const noexcept;
  double volume() const noexcept { return length_ * length_ * length_; }

  /// Integer wavenumber stored at axis index i.
  int wavenumber(int index) const noexcept { return index < n_ / 2 ? index : index - n_; }
  std::array<int, 3> mode(std::size_t flat) const noexcept;
  /// Flat index of the integer mode k, reduced modulo N.
  std::size_t flat(int kx, int ky, int kz) const noexcept;
  std::size_t flat(const std::array<int, 3>& k) const noexcept { return flat(k[0], k[1], k[2]); }
  /// Flat index of -k (the Hermitian partner).
  std::size_t conjugate(std::size_t flat) const noexcept;

  /// Physical wavevector component along `axis` for a flat mode.
  double kappa(int axis, std::size_t flat) const noexcept { return tables_->kappa[axis][flat]; }
  /// Physical |k|^2.
  double k_squared(std::size_t flat) const noexcept { return tables_->k2[flat]; }
  const std::vector<double>& k_squared() const noexcept { return tables_->k2; }

  /// Largest integer wavenumber kept by the 2/3 rule: 3*kmax < N.
  int dealias_cutoff() const noexcept { return (n_ - 1) / 3; }
  bool in_dealiased_band(std::size_t flat) const noexcept { return tables_->band[flat] != 0; }
  /// True when any axis carries the unpaired wavenumber -N/2.
  bool is_nyquist(std::size_t flat) const noexcept;

  bool operator==(const WaveGrid& other) const noexcept {
    return n_ == other.n_ && length_ == other.length_;
  }

 private:
  struct Tables {
    std::array<std::vector<double>, 3> kappa;
    std::vector<double> k2;
    std::vector<unsigned char> band;
  };

  WaveGrid(int n, double length);

  int n_;
  double length_;
  double scale_;
  std::shared_ptr<const Tables> tables_;
};

}  // namespace nsreg
