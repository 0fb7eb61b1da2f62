#include "nsreg/trace_io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "nsreg/errors.hpp"

namespace nsreg {

void write_trace_csv(std::ostream& os, const NormTrace& trace, double nu) {
  os << kTraceCsvHeader << '\n';
  std::vector<double> residual(trace.size(), 0.0);
  if (trace.size() >= 2) residual = energy_balance_residual(trace, nu);
  char line[512];
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto& s = trace.samples()[i];
    std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.t,
                  s.l2_sq, s.h1_sq, s.h2_sq, s.f_dot_u, s.int_h1_sq, s.int_f_sq, residual[i]);
    os << line;
  }
}

const char* to_string(Termination t) noexcept {
  return t == Termination::completed ? "completed" : "blowup";
}

nlohmann::json to_json(const SolverConfig& config) {
  nlohmann::json j{{"nu", config.nu},
                   {"dt", config.dt},
                   {"T", config.t_end},
                   {"h1_ceiling", config.h1_ceiling},
                   {"integrator", config.integrator},
                   {"dealias", "2/3"}};
  j["cfl"] = config.cfl ? nlohmann::json(*config.cfl) : nlohmann::json(nullptr);
  return j;
}

void write_file_atomically(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw ConfigError("cannot write " + tmp.string());
    os << content;
    if (!os) throw ConfigError("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace nsreg
