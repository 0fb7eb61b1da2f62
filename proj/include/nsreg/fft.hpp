#pragma once

#include <complex>
#include <span>

namespace nsreg {

using Complex = std::complex<double>;

/// Complex 3D transform of an N^3 array in row-major (x, y, z) order.
///
/// Plans are created once per resolution and shared; execution is
/// reentrant, so one Fft3d may be used from several threads on distinct
/// buffers.
class Fft3d {
 public:
  explicit Fft3d(int n);

  /// out(k) = N^-3 * sum_x in(x) exp(-i k.x). Fourier coefficients.
  void forward(std::span<const Complex> in, std::span<Complex> out) const;
  /// out(x) = sum_k in(k) exp(+i k.x). Synthesis, unnormalized.
  void backward(std::span<const Complex> in, std::span<Complex> out) const;

  int n() const noexcept { return n_; }

 private:
  int n_;
  void* forward_plan_;
  void* backward_plan_;
};

}  // namespace nsreg
