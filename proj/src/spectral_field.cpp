#include "nsreg/spectral_field.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <map>
#include <random>
#include <string>

#include "nsreg/errors.hpp"

namespace nsreg {
namespace {

void require_same_grid(const VectorField& a, const VectorField& b) {
  if (!(a.grid() == b.grid())) throw ShapeError("fields live on different grids");
}

double norm3(const Complex& a, const Complex& b, const Complex& c) {
  return std::sqrt(std::norm(a) + std::norm(b) + std::norm(c));
}

// Flat index of integer mode k on an m^3 grid.
std::size_t flat_on(int m, const std::array<int, 3>& k) {
  auto wrap = [m](int v) { return static_cast<std::size_t>(v < 0 ? v + m : v); };
  const auto mm = static_cast<std::size_t>(m);
  return (wrap(k[0]) * mm + wrap(k[1])) * mm + wrap(k[2]);
}

// Embeds spectral data of an N-grid into an M-grid (M >= N), dropping Nyquist modes.
std::vector<Complex> pad(const WaveGrid& grid, std::span<const Complex> coeffs, int m) {
  const std::size_t total = static_cast<std::size_t>(m) * m * m;
  std::vector<Complex> out(total);
  if (m == grid.n()) {
    std::copy(coeffs.begin(), coeffs.end(), out.begin());
    return out;
  }
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    if (grid.is_nyquist(idx)) continue;
    out[flat_on(m, grid.mode(idx))] = coeffs[idx];
  }
  return out;
}

void check_sampling(const WaveGrid& grid, int m) {
  if (m < grid.n() || m % 2 != 0) {
    throw ConfigError("physical sampling must be even and at least the grid resolution");
  }
}

}  // namespace

// ---------------------------------------------------------------- VectorField

VectorField::VectorField(WaveGrid grid) : grid_(std::move(grid)) {
  for (auto& c : data_) c.assign(grid_.size(), Complex{});
}

VectorField& VectorField::operator+=(const VectorField& other) { return add_scaled(1.0, other); }

VectorField& VectorField::operator-=(const VectorField& other) { return add_scaled(-1.0, other); }

VectorField& VectorField::operator*=(double factor) {
  for (auto& c : data_)
    for (auto& v : c) v *= factor;
  return *this;
}

VectorField& VectorField::add_scaled(double factor, const VectorField& other) {
  require_same_grid(*this, other);
  for (int a = 0; a < 3; ++a) {
    auto& dst = data_[a];
    const auto& src = other.data_[a];
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += factor * src[i];
  }
  return *this;
}

// ----------------------------------------------------------- SpectralVelocity

SpectralVelocity SpectralVelocity::zero(const WaveGrid& grid) {
  return SpectralVelocity(VectorField(grid));
}

SpectralVelocity SpectralVelocity::validated(VectorField field, double tolerance) {
  const double scale = max_coefficient(field);
  const WaveGrid& grid = field.grid();
  double stray = 0.0;
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    if (idx != 0 && !grid.is_nyquist(idx)) continue;
    for (int a = 0; a < 3; ++a) stray = std::max(stray, std::abs(field.at(a, idx)));
  }
  if (stray > tolerance * scale || hermitian_defect(field) > tolerance ||
      relative_divergence(field) > tolerance) {
    throw DomainError("coefficients are not a real, zero-mean, divergence-free field");
  }
  return SpectralVelocity(std::move(field));
}

SpectralVelocity SpectralVelocity::scaled(double factor) const {
  VectorField f = field_;
  f *= factor;
  return SpectralVelocity(std::move(f));
}

SpectralVelocity leray_project(VectorField raw) {
  const WaveGrid& grid = raw.grid();
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const double k2 = grid.k_squared(idx);
    if (k2 == 0.0 || grid.is_nyquist(idx)) {
      for (int a = 0; a < 3; ++a) raw.at(a, idx) = Complex{};
      continue;
    }
    const double kx = grid.kappa(0, idx), ky = grid.kappa(1, idx), kz = grid.kappa(2, idx);
    const Complex div = kx * raw.at(0, idx) + ky * raw.at(1, idx) + kz * raw.at(2, idx);
    const Complex s = div / k2;
    raw.at(0, idx) -= kx * s;
    raw.at(1, idx) -= ky * s;
    raw.at(2, idx) -= kz * s;
  }
  return SpectralVelocity(std::move(raw));
}

SpectralVelocity stokes_apply(const SpectralVelocity& u, double power) {
  if (!(power >= 0.0)) throw DomainError("Stokes operator powers must be non-negative");
  VectorField out = u.coefficients();
  if (power == 0.0) return SpectralVelocity(std::move(out));
  const WaveGrid& grid = u.grid();
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const double factor = std::pow(grid.k_squared(idx), power);
    for (int a = 0; a < 3; ++a) out.at(a, idx) *= factor;
  }
  return SpectralVelocity(std::move(out));
}

StokesSpectrum stokes_eigenvalues(const WaveGrid& grid, int count) {
  if (count < 1) throw ConfigError("eigenvalue count must be at least 1");
  // Shells with |k|^2 <= kmax^2 lie entirely inside the non-Nyquist box.
  const int kmax = grid.n() / 2 - 1;
  std::map<int, int> shells;
  for (int kx = -kmax; kx <= kmax; ++kx)
    for (int ky = -kmax; ky <= kmax; ++ky)
      for (int kz = -kmax; kz <= kmax; ++kz) {
        const int k2 = kx * kx + ky * ky + kz * kz;
        if (k2 > 0 && k2 <= kmax * kmax) ++shells[k2];
      }
  StokesSpectrum spectrum;
  const double s2 = grid.scale() * grid.scale();
  for (const auto& [k2, n] : shells) {
    if (static_cast<int>(spectrum.eigenvalues.size()) == count) break;
    spectrum.eigenvalues.push_back({k2 * s2, n});
  }
  spectrum.truncated = static_cast<int>(spectrum.eigenvalues.size()) < count;
  return spectrum;
}

double sobolev_norm_squared(const VectorField& u, double m) {
  if (!(m >= 0.0)) throw DomainError("Sobolev index must be non-negative");
  const WaveGrid& grid = u.grid();
  const auto& k2 = grid.k_squared();
  double sum = 0.0;
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const double amp = std::norm(u.at(0, idx)) + std::norm(u.at(1, idx)) + std::norm(u.at(2, idx));
    if (amp == 0.0) continue;
    sum += (m == 0.0 ? 1.0 : std::pow(k2[idx], m)) * amp;
  }
  return sum * grid.volume();
}

double sobolev_norm(const VectorField& u, double m) { return std::sqrt(sobolev_norm_squared(u, m)); }

double inner_product(const VectorField& a, const VectorField& b) {
  require_same_grid(a, b);
  double sum = 0.0;
  for (int c = 0; c < 3; ++c) {
    const auto x = a.component(c);
    const auto y = b.component(c);
    for (std::size_t i = 0; i < x.size(); ++i) sum += (x[i] * std::conj(y[i])).real();
  }
  return sum * a.grid().volume();
}

VectorField dealias(VectorField u) {
  const WaveGrid& grid = u.grid();
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    if (grid.in_dealiased_band(idx)) continue;
    for (int a = 0; a < 3; ++a) u.at(a, idx) = Complex{};
  }
  return u;
}

// --------------------------------------------------------------- transforms

RealVelocity to_physical(const VectorField& u) { return to_physical(u, u.grid().n()); }

RealVelocity to_physical(const VectorField& u, int m) {
  check_sampling(u.grid(), m);
  const Fft3d fft(m);
  RealVelocity out{u.grid(), m, {}};
  std::vector<Complex> work(static_cast<std::size_t>(m) * m * m);
  for (int a = 0; a < 3; ++a) {
    const auto padded = pad(u.grid(), u.component(a), m);
    fft.backward(padded, work);
    auto& dst = out.samples[a];
    dst.resize(work.size());
    std::transform(work.begin(), work.end(), dst.begin(), [](const Complex& c) { return c.real(); });
  }
  return out;
}

VectorField from_physical(const RealVelocity& v) {
  if (v.points_per_axis != v.grid.n()) {
    throw ShapeError("physical samples must match the grid resolution");
  }
  const Fft3d fft(v.grid.n());
  VectorField out(v.grid);
  std::vector<Complex> work(v.grid.size());
  for (int a = 0; a < 3; ++a) {
    if (v.samples[a].size() != v.grid.size()) throw ShapeError("sample count must be N^3");
    std::copy(v.samples[a].begin(), v.samples[a].end(), work.begin());
    fft.forward(work, out.component(a));
  }
  return out;
}

std::array<std::array<std::vector<double>, 3>, 3> physical_gradient(const VectorField& u, int m) {
  const WaveGrid& grid = u.grid();
  check_sampling(grid, m);
  const Fft3d fft(m);
  std::array<std::array<std::vector<double>, 3>, 3> grad;
  std::vector<Complex> deriv(grid.size());
  std::vector<Complex> work(static_cast<std::size_t>(m) * m * m);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (std::size_t idx = 0; idx < grid.size(); ++idx) {
        deriv[idx] = grid.is_nyquist(idx) ? Complex{}
                                          : Complex(0.0, grid.kappa(j, idx)) * u.at(i, idx);
      }
      const auto padded = pad(grid, deriv, m);
      fft.backward(padded, work);
      auto& dst = grad[i][j];
      dst.resize(work.size());
      std::transform(work.begin(), work.end(), dst.begin(), [](const Complex& c) { return c.real(); });
    }
  }
  return grad;
}

// ------------------------------------------------------------ nonlinear terms

double trilinear_b(const VectorField& u, const VectorField& v, const VectorField& w) {
  require_same_grid(u, v);
  require_same_grid(u, w);
  const WaveGrid& grid = u.grid();
  const int n = grid.n();
  const auto pu = to_physical(dealias(u), n);
  const auto pw = to_physical(dealias(w), n);
  const auto gv = physical_gradient(dealias(v), n);
  double sum = 0.0;
  for (std::size_t x = 0; x < grid.size(); ++x) {
    for (int j = 0; j < 3; ++j) {
      double adv = 0.0;
      for (int i = 0; i < 3; ++i) adv += pu.samples[i][x] * gv[j][i][x];
      sum += adv * pw.samples[j][x];
    }
  }
  return sum * grid.cell_volume();
}

NonlinearEvaluator::NonlinearEvaluator(const WaveGrid& grid) : grid_(grid), fft_(grid.n()) {
  for (auto& c : velocity_) c.resize(grid.size());
  for (auto& c : vorticity_) c.resize(grid.size());
  spectral_.resize(grid.size());
  product_.resize(grid.size());
}

void NonlinearEvaluator::negative_advection(const VectorField& u, VectorField& out) {
  if (!(u.grid() == grid_) || !(out.grid() == grid_)) {
    throw ShapeError("evaluator used with a field from another grid");
  }
  const WaveGrid& g = grid_;
  const std::size_t size = g.size();
  // Physical velocity and vorticity from band-limited coefficients.
  for (int a = 0; a < 3; ++a) {
    for (std::size_t idx = 0; idx < size; ++idx) {
      spectral_[idx] = g.in_dealiased_band(idx) ? u.at(a, idx) : Complex{};
    }
    fft_.backward(spectral_, velocity_[a]);
  }
  for (int a = 0; a < 3; ++a) {
    const int b = (a + 1) % 3, c = (a + 2) % 3;
    for (std::size_t idx = 0; idx < size; ++idx) {
      if (!g.in_dealiased_band(idx)) {
        spectral_[idx] = Complex{};
        continue;
      }
      const Complex curl = g.kappa(b, idx) * u.at(c, idx) - g.kappa(c, idx) * u.at(b, idx);
      spectral_[idx] = Complex(0.0, 1.0) * curl;
    }
    fft_.backward(spectral_, vorticity_[a]);
  }
  // (u . grad) u = omega x u + grad(|u|^2 / 2); the gradient part is removed
  // by the projection below.
  for (int a = 0; a < 3; ++a) {
    const int b = (a + 1) % 3, c = (a + 2) % 3;
    for (std::size_t x = 0; x < size; ++x) {
      product_[x] = Complex(vorticity_[b][x].real() * velocity_[c][x].real() -
                                vorticity_[c][x].real() * velocity_[b][x].real(),
                            0.0);
    }
    fft_.forward(product_, out.component(a));
  }
  for (std::size_t idx = 0; idx < size; ++idx) {
    const double k2 = g.k_squared(idx);
    if (!g.in_dealiased_band(idx) || k2 == 0.0) {
      for (int a = 0; a < 3; ++a) out.at(a, idx) = Complex{};
      continue;
    }
    const double kx = g.kappa(0, idx), ky = g.kappa(1, idx), kz = g.kappa(2, idx);
    const Complex s = (kx * out.at(0, idx) + ky * out.at(1, idx) + kz * out.at(2, idx)) / k2;
    out.at(0, idx) = -(out.at(0, idx) - kx * s);
    out.at(1, idx) = -(out.at(1, idx) - ky * s);
    out.at(2, idx) = -(out.at(2, idx) - kz * s);
  }
}

SpectralVelocity nonlinear_term(const SpectralVelocity& u) {
  NonlinearEvaluator evaluator(u.grid());
  VectorField out(u.grid());
  evaluator.negative_advection(u, out);
  out *= -1.0;
  return leray_project(std::move(out));
}

// ------------------------------------------------------------ constructors

SpectralVelocity random_divfree_field(const WaveGrid& grid, std::uint64_t seed,
                                      double energy_spectrum_slope, double amplitude) {
  if (!(amplitude >= 0.0)) throw DomainError("amplitude must be non-negative");
  VectorField raw(grid);
  if (amplitude == 0.0) return leray_project(std::move(raw));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int cutoff = grid.dealias_cutoff();
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const auto k = grid.mode(idx);
    const int k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    if (k2 == 0 || k2 > cutoff * cutoff || grid.is_nyquist(idx)) continue;
    const std::size_t partner = grid.conjugate(idx);
    if (partner < idx) continue;
    std::array<Complex, 3> v;
    for (auto& c : v) {
      const double re = normal(rng);
      const double im = normal(rng);
      c = Complex(re, im);
    }
    const double kx = grid.kappa(0, idx), ky = grid.kappa(1, idx), kz = grid.kappa(2, idx);
    const double kappa2 = grid.k_squared(idx);
    const Complex s = (kx * v[0] + ky * v[1] + kz * v[2]) / kappa2;
    v[0] -= kx * s;
    v[1] -= ky * s;
    v[2] -= kz * s;
    const double len = norm3(v[0], v[1], v[2]);
    if (len == 0.0) continue;
    const double magnitude = std::pow(kappa2, energy_spectrum_slope / 4.0) / len;
    for (int a = 0; a < 3; ++a) {
      raw.at(a, idx) = magnitude * v[a];
      raw.at(a, partner) = std::conj(raw.at(a, idx));
    }
  }
  auto projected = leray_project(std::move(raw));
  const double norm = sobolev_norm(projected, 0.0);
  return projected.scaled(amplitude / norm);
}

SpectralVelocity shear_flow(const WaveGrid& grid, double amplitude) {
  VectorField raw(grid);
  // sin(s y) = (e^{i s y} - e^{-i s y}) / 2i
  raw.at(0, grid.flat(0, 1, 0)) = Complex(0.0, -0.5 * amplitude);
  raw.at(0, grid.flat(0, -1, 0)) = Complex(0.0, 0.5 * amplitude);
  return leray_project(std::move(raw));
}

SpectralVelocity taylor_green(const WaveGrid& grid, double amplitude) {
  RealVelocity phys{grid, grid.n(), {}};
  const int n = grid.n();
  const double h = 2.0 * std::numbers::pi / n;
  for (auto& s : phys.samples) s.resize(grid.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        const std::size_t x = (static_cast<std::size_t>(i) * n + j) * n + l;
        const double sx = std::sin(i * h), cx = std::cos(i * h);
        const double sy = std::sin(j * h), cy = std::cos(j * h);
        const double cz = std::cos(l * h);
        phys.samples[0][x] = amplitude * sx * cy * cz;
        phys.samples[1][x] = -amplitude * cx * sy * cz;
        phys.samples[2][x] = 0.0;
      }
  return leray_project(from_physical(phys));
}

// -------------------------------------------------------------- diagnostics

double max_coefficient(const VectorField& u) {
  double m = 0.0;
  for (int a = 0; a < 3; ++a)
    for (const auto& c : u.component(a)) m = std::max(m, std::abs(c));
  return m;
}

double relative_divergence(const VectorField& u) {
  const double scale = max_coefficient(u);
  if (scale == 0.0) return 0.0;
  const WaveGrid& g = u.grid();
  double worst = 0.0;
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    const double k2 = g.k_squared(idx);
    if (k2 == 0.0) continue;
    const Complex div = g.kappa(0, idx) * u.at(0, idx) + g.kappa(1, idx) * u.at(1, idx) +
                        g.kappa(2, idx) * u.at(2, idx);
    worst = std::max(worst, std::abs(div) / std::sqrt(k2));
  }
  return worst / scale;
}

double hermitian_defect(const VectorField& u) {
  const double scale = max_coefficient(u);
  if (scale == 0.0) return 0.0;
  const WaveGrid& g = u.grid();
  double worst = 0.0;
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    const std::size_t p = g.conjugate(idx);
    for (int a = 0; a < 3; ++a) worst = std::max(worst, std::abs(u.at(a, p) - std::conj(u.at(a, idx))));
  }
  return worst / scale;
}

}  // namespace nsreg
