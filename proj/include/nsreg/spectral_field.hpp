#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "nsreg/fft.hpp"
#include "nsreg/wave_grid.hpp"

namespace nsreg {

/// Three-component Fourier coefficient array with no invariants attached.
/// u(x) = sum_k c(k) exp(i k.x), coefficients stored in WaveGrid flat order.
class VectorField {
 public:
  explicit VectorField(WaveGrid grid);

  const WaveGrid& grid() const noexcept { return grid_; }
  std::span<Complex> component(int axis) noexcept { return data_[axis]; }
  std::span<const Complex> component(int axis) const noexcept { return data_[axis]; }
  Complex& at(int axis, std::size_t flat) noexcept { return data_[axis][flat]; }
  const Complex& at(int axis, std::size_t flat) const noexcept { return data_[axis][flat]; }

  VectorField& operator+=(const VectorField& other);
  VectorField& operator-=(const VectorField& other);
  VectorField& operator*=(double factor);
  /// this += factor * other
  VectorField& add_scaled(double factor, const VectorField& other);

  bool operator==(const VectorField& other) const = default;

 private:
  WaveGrid grid_;
  std::array<std::vector<Complex>, 3> data_;
};

/// Divergence-free, zero-mean, Hermitian-symmetric velocity coefficients.
/// Only leray_project (and operations that preserve the invariants) create one.
class SpectralVelocity {
 public:
  static SpectralVelocity zero(const WaveGrid& grid);
  /// Adopts coefficients as-is after checking every invariant to a relative
  /// `tolerance`; throws DomainError otherwise. Nyquist modes must vanish.
  static SpectralVelocity validated(VectorField field, double tolerance);

  const WaveGrid& grid() const noexcept { return field_.grid(); }
  const VectorField& coefficients() const noexcept { return field_; }
  operator const VectorField&() const noexcept { return field_; }

  /// Scaling preserves every invariant.
  SpectralVelocity scaled(double factor) const;

  bool operator==(const SpectralVelocity& other) const = default;

 private:
  explicit SpectralVelocity(VectorField field) : field_(std::move(field)) {}
  friend SpectralVelocity leray_project(VectorField raw);
  friend SpectralVelocity stokes_apply(const SpectralVelocity& u, double power);

  VectorField field_;
};

/// Real velocity samples on the N^3 physical grid, x_j = j L / N.
struct RealVelocity {
  WaveGrid grid;
  int points_per_axis;
  std::array<std::vector<double>, 3> samples;
};

struct StokesEigenvalue {
  double value;
  /// Number of lattice vectors k with |k|^2 = value; the eigenspace in the
  /// divergence-free space has twice this dimension.
  int lattice_count;
};

struct StokesSpectrum {
  std::vector<StokesEigenvalue> eigenvalues;
  /// Set when fewer than the requested count fit on the grid.
  bool truncated = false;
};

/// Modewise u <- u - k (k.u)/|k|^2, u(0) <- 0. Nyquist modes, which have no
/// Hermitian partner on the grid, are zeroed.
SpectralVelocity leray_project(VectorField raw);

/// A^power u, i.e. multiplication by |k|^(2 power). power must be >= 0.
SpectralVelocity stokes_apply(const SpectralVelocity& u, double power);

/// First `count` distinct Stokes eigenvalues representable on the grid.
StokesSpectrum stokes_eigenvalues(const WaveGrid& grid, int count);

/// ||A^(m/2) u||_{L^2}, normalized to physical-space integrals over the box.
double sobolev_norm(const VectorField& u, double m);
/// Square of sobolev_norm without the final square root.
double sobolev_norm_squared(const VectorField& u, double m);

/// Physical L^2 inner product (a, b).
double inner_product(const VectorField& a, const VectorField& b);

/// Zeroes every mode outside the 2/3-rule band.
VectorField dealias(VectorField u);

/// sum_ij int u_i d_i v_j w_j dx with all three factors truncated to the
/// 2/3-rule band, so the grid quadrature is exact.
double trilinear_b(const VectorField& u, const VectorField& v, const VectorField& w);

/// B(u, u) = P(u . grad u), dealiased.
SpectralVelocity nonlinear_term(const SpectralVelocity& u);

/// Random solenoidal field with |c(k)| ~ |k|^(slope/2) inside the dealiased
/// band, rescaled so that its L^2 norm equals `amplitude`. Deterministic in seed.
SpectralVelocity random_divfree_field(const WaveGrid& grid, std::uint64_t seed,
                                      double energy_spectrum_slope, double amplitude);

/// u = amplitude * (sin(2 pi y / L), 0, 0).
SpectralVelocity shear_flow(const WaveGrid& grid, double amplitude = 1.0);
/// u = amplitude * (sin x cos y cos z, -cos x sin y cos z, 0) on the unit-scaled box.
SpectralVelocity taylor_green(const WaveGrid& grid, double amplitude = 1.0);

RealVelocity to_physical(const VectorField& u);
/// Samples on a finer M^3 grid by zero-padding; M must be >= N and even.
RealVelocity to_physical(const VectorField& u, int points_per_axis);
VectorField from_physical(const RealVelocity& v);

/// Physical gradient samples d u_i / d x_j for all nine (i, j) pairs, on an
/// M^3 grid; index [i][j].
std::array<std::array<std::vector<double>, 3>, 3> physical_gradient(const VectorField& u,
                                                                    int points_per_axis);

/// max_k |k.c(k)| / max_k |c(k)|; zero for the zero field.
double relative_divergence(const VectorField& u);
/// max_k |c(-k) - conj(c(k))| / max_k |c(k)|.
double hermitian_defect(const VectorField& u);
/// max over modes and components of |c(k)|.
double max_coefficient(const VectorField& u);

/// Reusable scratch space for repeated B(u, u) evaluations on one grid.
/// Not shareable between threads; create one per simulation.
class NonlinearEvaluator {
 public:
  explicit NonlinearEvaluator(const WaveGrid& grid);

  /// out = -B(u, u), skipping the construction of a SpectralVelocity.
  void negative_advection(const VectorField& u, VectorField& out);

 private:
  WaveGrid grid_;
  Fft3d fft_;
  std::array<std::vector<Complex>, 3> velocity_;
  std::array<std::vector<Complex>, 3> vorticity_;
  std::vector<Complex> spectral_;
  std::vector<Complex> product_;
};

}  // namespace nsreg
