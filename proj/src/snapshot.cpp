#include "nsreg/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "nsreg/errors.hpp"

namespace nsreg {
namespace {

static_assert(std::endian::native == std::endian::little,
              "snapshot I/O assumes a little-endian host");

constexpr char kMagic[5] = {'N', 'S', 'R', 'C', '1'};

template <typename T>
void put(std::ostream& os, T value) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  os.write(bytes, sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  char bytes[sizeof(T)];
  if (!is.read(bytes, sizeof(T))) throw ShapeError("snapshot truncated");
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

std::filesystem::path sidecar(const std::filesystem::path& path) {
  auto p = path;
  p += ".json";
  return p;
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const SpectralVelocity& u,
                    const nlohmann::json& provenance) {
  const WaveGrid& grid = u.grid();
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open " + path.string() + " for writing");
  os.write(kMagic, sizeof(kMagic));
  put<std::int64_t>(os, grid.n());
  put<double>(os, grid.length());
  put<std::uint32_t>(os, 3);
  const int half = grid.n() / 2;
  for (int kx = -half; kx < half; ++kx)
    for (int ky = -half; ky < half; ++ky)
      for (int kz = -half; kz < half; ++kz) {
        const std::size_t idx = grid.flat(kx, ky, kz);
        for (int a = 0; a < 3; ++a) {
          put<double>(os, u.coefficients().at(a, idx).real());
          put<double>(os, u.coefficients().at(a, idx).imag());
        }
      }
  if (!os) throw ConfigError("failed writing " + path.string());

  nlohmann::json meta = provenance;
  meta["format"] = "NSRC1";
  meta["N"] = grid.n();
  meta["L"] = grid.length();
  std::ofstream js(sidecar(path));
  js << meta.dump(2) << '\n';
}

Snapshot read_snapshot(const std::filesystem::path& path, double tolerance) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open " + path.string());
  char magic[sizeof(kMagic)];
  if (!is.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw ShapeError("not an NSRC1 snapshot: " + path.string());
  }
  const auto n = get<std::int64_t>(is);
  const auto length = get<double>(is);
  const auto components = get<std::uint32_t>(is);
  if (components != 3) throw ShapeError("snapshot must hold 3 components");
  if (n < 4 || n > 4096) throw ShapeError("implausible snapshot resolution");
  const WaveGrid grid = WaveGrid::make(static_cast<int>(n), length);

  VectorField raw(grid);
  const int half = grid.n() / 2;
  for (int kx = -half; kx < half; ++kx)
    for (int ky = -half; ky < half; ++ky)
      for (int kz = -half; kz < half; ++kz) {
        const std::size_t idx = grid.flat(kx, ky, kz);
        for (int a = 0; a < 3; ++a) {
          const double re = get<double>(is);
          const double im = get<double>(is);
          raw.at(a, idx) = Complex(re, im);
        }
      }
  if (is.peek() != std::char_traits<char>::eof()) throw ShapeError("trailing bytes in snapshot");
  SpectralVelocity field = SpectralVelocity::validated(std::move(raw), tolerance);

  nlohmann::json provenance = nlohmann::json::object();
  if (std::ifstream js(sidecar(path)); js) provenance = nlohmann::json::parse(js);
  return {std::move(field), std::move(provenance)};
}

}  // namespace nsreg
