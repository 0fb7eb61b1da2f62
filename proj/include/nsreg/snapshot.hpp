#pragma once

#include <filesystem>
#include <json.hpp>

#include "nsreg/spectral_field.hpp"

namespace nsreg {

/// Binary field snapshot:
///
///   bytes 0-4   magic "NSRC1"
///   int64       N
///   float64     L
///   uint32      component count (3)
///   then for every mode in lexicographic order of (kx, ky, kz), each axis
///   running from -N/2 to N/2-1, three complex values (x, y, z components)
///   written as float64 real and imaginary parts.
///
/// Everything is little-endian. A JSON sidecar `<path>.json` carries
/// provenance (seed, generator, ...).
void write_snapshot(const std::filesystem::path& path, const SpectralVelocity& u,
                    const nlohmann::json& provenance);

struct Snapshot {
  SpectralVelocity field;
  nlohmann::json provenance;
};

/// Throws ShapeError on a malformed file and DomainError when the stored
/// coefficients violate the velocity invariants beyond `tolerance`.
Snapshot read_snapshot(const std::filesystem::path& path, double tolerance = 1e-10);

}  // namespace nsreg
