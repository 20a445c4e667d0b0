#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include "rcd/solvers.hpp"

namespace rcd {

inline constexpr const char* kTraceHeader =
    "epoch,residual,f,psi,nnz,correct_nnz,incorrect_zeros,elapsed_s";

// 17 significant digits: parses back to the same double.
std::string format_double(double v);

// Header plus one line per row; certificate columns are empty when unknown.
void write_trace_csv(std::ostream& out, std::span<const TraceRow> rows);
void write_trace_csv(const std::filesystem::path& path, std::span<const TraceRow> rows);

}  // namespace rcd
