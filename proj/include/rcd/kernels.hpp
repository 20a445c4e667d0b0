#pragma once

// Arithmetic inner loops used by the coordinate descent oracles.
//
// Every kernel has a scalar reference implementation; x86-64 builds also
// carry AVX2 and AVX-512 variants. The active table is chosen once at startup
// from CPU features (override with RCD_SIMD=scalar|avx2|avx512) and can be
// switched at runtime with select(). Variants differ from the scalar kernels
// only by summation order and FMA contraction.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace rcd::kernels {

enum class Isa { scalar, avx2, avx512 };

struct Table {
  // sum_k a[k] * b[k]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // sum_k a[k]^2
  double (*sum_squares)(const double* a, std::size_t n);
  // sum_k |a[k]|
  double (*abs_sum)(const double* a, std::size_t n);
  // sum_k (a[k] - b[k]) * (a[k] + b[k]); accurate a^2 - b^2 when a ~ b
  double (*diff_dot_sum)(const double* a, const double* b, std::size_t n);
  // sum_k vals[k] * dense[idx[k]]
  double (*gather_dot)(const double* vals, const std::int32_t* idx,
                       std::size_t nnz, const double* dense);
  // dense[idx[k]] += alpha * vals[k]; returns sum_k d_k * (y_k + d_k / 2),
  // the exact change of (1/2)||dense||^2. Indices must be distinct.
  double (*scatter_axpy)(double alpha, const double* vals,
                         const std::int32_t* idx, std::size_t nnz,
                         double* dense);
  // sum_k vals[k] * max(0, 1 + dense[idx[k]])
  double (*gather_hinge)(const double* vals, const std::int32_t* idx,
                         std::size_t nnz, const double* dense);
};

bool supported(Isa isa);
const Table& table(Isa isa);

const Table& active();
Isa active_isa();
// Throws std::invalid_argument when the ISA is not available on this CPU/build.
void select(Isa isa);

std::string_view name(Isa isa);
Isa parse_isa(std::string_view text);

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}
inline double sum_squares(std::span<const double> a) {
  return active().sum_squares(a.data(), a.size());
}
inline double abs_sum(std::span<const double> a) {
  return active().abs_sum(a.data(), a.size());
}

}  // namespace rcd::kernels
