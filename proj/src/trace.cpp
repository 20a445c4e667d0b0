#include "rcd/trace.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "rcd/errors.hpp"

namespace rcd {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trace_csv(std::ostream& out, std::span<const TraceRow> rows) {
  out << kTraceHeader << '\n';
  for (const auto& r : rows) {
    out << format_double(r.epoch) << ',' << format_double(r.residual) << ',' << format_double(r.f) << ','
        << format_double(r.psi) << ',' << r.nnz << ',';
    if (r.correct_nnz) out << *r.correct_nnz;
    out << ',';
    if (r.incorrect_zeros) out << *r.incorrect_zeros;
    out << ',' << format_double(r.elapsed_s) << '\n';
  }
}

void write_trace_csv(const std::filesystem::path& path, std::span<const TraceRow> rows) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  write_trace_csv(out, rows);
  out.close();
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace rcd
