// AVX-512F variants. Compiled with -mavx512f; entered only after a runtime
// CPU check. Unlike AVX2 these have a native scatter for the sparse axpy.

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "kernels_impl.hpp"

namespace rcd::kernels::avx512 {

double dot(const double* a, const double* b, std::size_t n) {
  __m512d acc = _mm512_setzero_pd();
  std::size_t k = 0;
  for (; k + 8 <= n; k += 8)
    acc = _mm512_fmadd_pd(_mm512_loadu_pd(a + k), _mm512_loadu_pd(b + k), acc);
  double s = _mm512_reduce_add_pd(acc);
  for (; k < n; ++k) s += a[k] * b[k];
  return s;
}

double sum_squares(const double* a, std::size_t n) { return dot(a, a, n); }

double abs_sum(const double* a, std::size_t n) {
  __m512d acc = _mm512_setzero_pd();
  std::size_t k = 0;
  for (; k + 8 <= n; k += 8) acc = _mm512_add_pd(acc, _mm512_abs_pd(_mm512_loadu_pd(a + k)));
  double s = _mm512_reduce_add_pd(acc);
  for (; k < n; ++k) s += std::abs(a[k]);
  return s;
}

double diff_dot_sum(const double* a, const double* b, std::size_t n) {
  __m512d acc = _mm512_setzero_pd();
  std::size_t k = 0;
  for (; k + 8 <= n; k += 8) {
    const __m512d x = _mm512_loadu_pd(a + k);
    const __m512d y = _mm512_loadu_pd(b + k);
    acc = _mm512_fmadd_pd(_mm512_sub_pd(x, y), _mm512_add_pd(x, y), acc);
  }
  double s = _mm512_reduce_add_pd(acc);
  for (; k < n; ++k) s += (a[k] - b[k]) * (a[k] + b[k]);
  return s;
}

double gather_dot(const double* vals, const std::int32_t* idx, std::size_t nnz,
                  const double* dense) {
  __m512d acc = _mm512_setzero_pd();
  std::size_t k = 0;
  for (; k + 8 <= nnz; k += 8) {
    const __m256i ix = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(idx + k));
    const __m512d g = _mm512_i32gather_pd(ix, dense, 8);
    acc = _mm512_fmadd_pd(_mm512_loadu_pd(vals + k), g, acc);
  }
  double s = _mm512_reduce_add_pd(acc);
  for (; k < nnz; ++k) s += vals[k] * dense[idx[k]];
  return s;
}

double scatter_axpy(double alpha, const double* vals, const std::int32_t* idx,
                    std::size_t nnz, double* dense) {
  const __m512d va = _mm512_set1_pd(alpha);
  const __m512d half = _mm512_set1_pd(0.5);
  __m512d change = _mm512_setzero_pd();
  std::size_t k = 0;
  for (; k + 8 <= nnz; k += 8) {
    const __m256i ix = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(idx + k));
    const __m512d y = _mm512_i32gather_pd(ix, dense, 8);
    const __m512d d = _mm512_mul_pd(va, _mm512_loadu_pd(vals + k));
    change = _mm512_fmadd_pd(d, _mm512_fmadd_pd(half, d, y), change);
    _mm512_i32scatter_pd(dense, ix, _mm512_add_pd(y, d), 8);
  }
  double s = _mm512_reduce_add_pd(change);
  for (; k < nnz; ++k) {
    const double d = alpha * vals[k];
    double& y = dense[idx[k]];
    s += d * (y + 0.5 * d);
    y += d;
  }
  return s;
}

double gather_hinge(const double* vals, const std::int32_t* idx,
                    std::size_t nnz, const double* dense) {
  const __m512d one = _mm512_set1_pd(1.0);
  const __m512d zero = _mm512_setzero_pd();
  __m512d acc = _mm512_setzero_pd();
  std::size_t k = 0;
  for (; k + 8 <= nnz; k += 8) {
    const __m256i ix = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(idx + k));
    const __m512d r = _mm512_i32gather_pd(ix, dense, 8);
    const __m512d h = _mm512_max_pd(zero, _mm512_add_pd(one, r));
    acc = _mm512_fmadd_pd(_mm512_loadu_pd(vals + k), h, acc);
  }
  double s = _mm512_reduce_add_pd(acc);
  for (; k < nnz; ++k) s += vals[k] * std::max(0.0, 1.0 + dense[idx[k]]);
  return s;
}

const Table& table() {
  static const Table t{dot,          sum_squares,  abs_sum,     diff_dot_sum,
                       gather_dot,   scatter_axpy, gather_hinge};
  return t;
}

}  // namespace rcd::kernels::avx512
