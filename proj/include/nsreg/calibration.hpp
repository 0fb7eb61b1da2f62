#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "nsreg/spectral_field.hpp"

namespace nsreg {

/// ||u||_L6 / ||grad u|| and ||grad u||_L3 / (||grad u||^1/2 ||Lap u||^1/2) for one field.
struct CalibrationSample {
  std::uint64_t seed = 0;
  double embedding_ratio = 0.0;
  double interpolation_ratio = 0.0;
};

/// Quadrature on an M^3 grid with M = quad_factor * N, the gradient term extrapolated
/// from M and M/2 points. Zero fields give zero ratios.
CalibrationSample calibration_ratios(const SpectralVelocity& u, int quad_factor = 4);

struct CalibrationConfig {
  int n = 16;
  int members = 8;
  std::uint64_t first_seed = 1;
  double slope = -5.0 / 3.0;
  int quad_factor = 4;
};

struct CalibrationResult {
  std::vector<CalibrationSample> samples;
  /// Running maxima after each member; the last entry is the reported lower bound.
  std::vector<double> running_embedding;
  std::vector<double> running_interpolation;
  double default_embedding = 0.0;
  double default_interpolation = 0.0;
  std::vector<std::string> warnings;

  double max_embedding() const { return running_embedding.back(); }
  double max_interpolation() const { return running_interpolation.back(); }
  nlohmann::json to_json() const;
};

/// Samples are computed concurrently and reported in seed order. Throws
/// ConfigError when members < 1 or quad_factor < 1.
CalibrationResult calibrate(const CalibrationConfig& config);
/// Same reduction over caller-provided fields, with seed = position.
CalibrationResult calibrate(const std::vector<SpectralVelocity>& fields, int quad_factor = 4);

}  // namespace nsreg
