#pragma once

#include <filesystem>
#include <iosfwd>
#include <json.hpp>

#include "nsreg/ns_solver.hpp"

namespace nsreg {

inline constexpr const char* kTraceCsvHeader =
    "t,l2_sq,h1_sq,h2_sq,f_dot_u,int_h1_sq,int_f_sq,residual";

/// Writes the trace with the energy-balance residual column. Values use
/// 17 significant digits so reruns are byte-identical.
void write_trace_csv(std::ostream& os, const NormTrace& trace, double nu);

const char* to_string(Termination t) noexcept;

nlohmann::json to_json(const SolverConfig& config);

/// Writes `content` to `path` through a temporary file and a rename.
void write_file_atomically(const std::filesystem::path& path, const std::string& content);

}  // namespace nsreg
