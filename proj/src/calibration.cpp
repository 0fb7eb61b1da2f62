#include "nsreg/calibration.hpp"

#include <cmath>
#include <future>
#include <thread>

#include "nsreg/bounds.hpp"
#include "nsreg/errors.hpp"

namespace nsreg {

namespace {

CalibrationResult reduce(std::vector<CalibrationSample> samples) {
  CalibrationResult out;
  out.samples = std::move(samples);
  out.default_embedding = default_embedding_constant();
  out.default_interpolation = default_interpolation_constant();
  double e = 0.0, i = 0.0;
  for (const auto& s : out.samples) {
    e = std::max(e, s.embedding_ratio);
    i = std::max(i, s.interpolation_ratio);
    out.running_embedding.push_back(e);
    out.running_interpolation.push_back(i);
  }
  if (e > out.default_embedding) {
    out.warnings.push_back("empirical embedding ratio " + std::to_string(e) +
                           " exceeds the default constant " + std::to_string(out.default_embedding));
  }
  if (i > out.default_interpolation) {
    out.warnings.push_back("empirical interpolation ratio " + std::to_string(i) +
                           " exceeds the default constant " + std::to_string(out.default_interpolation));
  }
  return out;
}

double gradient_cubed_integral(const SpectralVelocity& u, int m) {
  const double h = u.grid().length() / m;
  const auto g = physical_gradient(u, m);
  double sum = 0.0;
  for (std::size_t x = 0; x < g[0][0].size(); ++x) {
    double s = 0.0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) s += g[a][b][x] * g[a][b][x];
    sum += s * std::sqrt(s);
  }
  return sum * h * h * h;
}

void check_factor(int quad_factor) {
  if (quad_factor < 1) throw ConfigError("quadrature factor must be at least 1");
}

}  // namespace

CalibrationSample calibration_ratios(const SpectralVelocity& u, int quad_factor) {
  check_factor(quad_factor);
  const auto& grid = u.grid();
  const int m = grid.n() * quad_factor;
  const double h = grid.length() / m;
  const double cell = h * h * h;

  const double grad = sobolev_norm(u, 1.0);
  const double lap = sobolev_norm(u, 2.0);
  if (grad == 0.0) return {};

  const auto phys = to_physical(u, m);
  double l6 = 0.0;
  for (std::size_t x = 0; x < phys.samples[0].size(); ++x) {
    double s = 0.0;
    for (int a = 0; a < 3; ++a) s += phys.samples[a][x] * phys.samples[a][x];
    l6 += s * s * s;
  }
  l6 = std::pow(l6 * cell, 1.0 / 6.0);

  // The trapezoid rule loses spectral accuracy where |grad u| vanishes and
  // converges like M^-4 there; extrapolate that term away.
  double l3 = gradient_cubed_integral(u, m);
  if (quad_factor >= 2 && m % 4 == 0) l3 = (16.0 * l3 - gradient_cubed_integral(u, m / 2)) / 15.0;
  l3 = std::cbrt(l3);

  return {0, l6 / grad, l3 / std::sqrt(grad * lap)};
}

CalibrationResult calibrate(const CalibrationConfig& config) {
  if (config.members < 1) throw ConfigError("calibration ensemble needs at least one member");
  check_factor(config.quad_factor);
  const auto grid = WaveGrid::make(config.n);
  // Bounded number of padded grids in flight.
  const int width = static_cast<int>(std::max(2u, std::thread::hardware_concurrency()));
  std::vector<CalibrationSample> samples;
  for (int start = 0; start < config.members; start += width) {
    std::vector<std::future<CalibrationSample>> jobs;
    for (int k = start; k < std::min(config.members, start + width); ++k) {
      const std::uint64_t seed = config.first_seed + static_cast<std::uint64_t>(k);
      jobs.push_back(std::async(std::launch::async, [grid, seed, &config] {
        auto s = calibration_ratios(random_divfree_field(grid, seed, config.slope, 1.0), config.quad_factor);
        s.seed = seed;
        return s;
      }));
    }
    for (auto& j : jobs) samples.push_back(j.get());
  }
  return reduce(std::move(samples));
}

CalibrationResult calibrate(const std::vector<SpectralVelocity>& fields, int quad_factor) {
  if (fields.empty()) throw ConfigError("calibration ensemble needs at least one member");
  std::vector<CalibrationSample> samples;
  for (std::size_t k = 0; k < fields.size(); ++k) {
    auto s = calibration_ratios(fields[k], quad_factor);
    s.seed = k;
    samples.push_back(s);
  }
  return reduce(std::move(samples));
}

nlohmann::json CalibrationResult::to_json() const {
  nlohmann::json members = nlohmann::json::array();
  for (const auto& s : samples) {
    members.push_back({{"seed", s.seed},
                       {"embedding_ratio", s.embedding_ratio},
                       {"interpolation_ratio", s.interpolation_ratio}});
  }
  return {{"members", std::move(members)},
          {"running_max_embedding", running_embedding},
          {"running_max_interpolation", running_interpolation},
          {"lower_bound_embedding", max_embedding()},
          {"lower_bound_interpolation", max_interpolation()},
          {"default_embedding", default_embedding},
          {"default_interpolation", default_interpolation},
          {"warnings", warnings}};
}

}  // namespace nsreg
