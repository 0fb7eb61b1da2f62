#include "nsreg/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace nsreg {
namespace {

struct PlanPair {
  fftw_plan forward;
  fftw_plan backward;
};

// fftw planning is not thread-safe; execution with the new-array interface is.
PlanPair plans_for(int n) {
  static std::mutex mutex;
  static std::map<int, PlanPair> cache;
  std::lock_guard lock(mutex);
  if (auto it = cache.find(n); it != cache.end()) return it->second;
  const std::size_t total = static_cast<std::size_t>(n) * n * n;
  std::vector<Complex> a(total), b(total);
  auto* in = reinterpret_cast<fftw_complex*>(a.data());
  auto* out = reinterpret_cast<fftw_complex*>(b.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  PlanPair pair{fftw_plan_dft_3d(n, n, n, in, out, FFTW_FORWARD, flags),
                fftw_plan_dft_3d(n, n, n, in, out, FFTW_BACKWARD, flags)};
  if (pair.forward == nullptr || pair.backward == nullptr) {
    throw std::runtime_error("fftw planning failed");
  }
  cache.emplace(n, pair);
  return pair;
}

}  // namespace

Fft3d::Fft3d(int n) : n_(n) {
  const auto pair = plans_for(n);
  forward_plan_ = pair.forward;
  backward_plan_ = pair.backward;
}

void Fft3d::forward(std::span<const Complex> in, std::span<Complex> out) const {
  // Out-of-place c2c transforms leave the input untouched.
  auto* src = const_cast<fftw_complex*>(reinterpret_cast<const fftw_complex*>(in.data()));
  fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), src,
                   reinterpret_cast<fftw_complex*>(out.data()));
  const double norm = 1.0 / static_cast<double>(out.size());
  for (auto& c : out) c *= norm;
}

void Fft3d::backward(std::span<const Complex> in, std::span<Complex> out) const {
  auto* src = const_cast<fftw_complex*>(reinterpret_cast<const fftw_complex*>(in.data()));
  fftw_execute_dft(static_cast<fftw_plan>(backward_plan_), src,
                   reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace nsreg
