// AVX2 + FMA variants. This translation unit is compiled with -mavx2 -mfma
// and must only be entered after a runtime CPU check.

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "kernels_impl.hpp"

namespace rcd::kernels::avx2 {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

const __m256d kAbsMask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 8 <= n; k += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k + 4), _mm256_loadu_pd(b + k + 4), acc1);
  }
  for (; k + 4 <= n; k += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; k < n; ++k) s += a[k] * b[k];
  return s;
}

double sum_squares(const double* a, std::size_t n) { return dot(a, a, n); }

double abs_sum(const double* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4)
    acc = _mm256_add_pd(acc, _mm256_and_pd(_mm256_loadu_pd(a + k), kAbsMask));
  double s = hsum(acc);
  for (; k < n; ++k) s += std::abs(a[k]);
  return s;
}

double diff_dot_sum(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d x = _mm256_loadu_pd(a + k);
    const __m256d y = _mm256_loadu_pd(b + k);
    acc = _mm256_fmadd_pd(_mm256_sub_pd(x, y), _mm256_add_pd(x, y), acc);
  }
  double s = hsum(acc);
  for (; k < n; ++k) s += (a[k] - b[k]) * (a[k] + b[k]);
  return s;
}

double gather_dot(const double* vals, const std::int32_t* idx, std::size_t nnz,
                  const double* dense) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= nnz; k += 4) {
    const __m128i ix = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + k));
    const __m256d g = _mm256_i32gather_pd(dense, ix, 8);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(vals + k), g, acc);
  }
  double s = hsum(acc);
  for (; k < nnz; ++k) s += vals[k] * dense[idx[k]];
  return s;
}

double scatter_axpy(double alpha, const double* vals, const std::int32_t* idx,
                    std::size_t nnz, double* dense) {
  const __m256d va = _mm256_set1_pd(alpha);
  const __m256d half = _mm256_set1_pd(0.5);
  __m256d change = _mm256_setzero_pd();
  alignas(32) double updated[4];
  std::size_t k = 0;
  for (; k + 4 <= nnz; k += 4) {
    const __m128i ix = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + k));
    const __m256d y = _mm256_i32gather_pd(dense, ix, 8);
    const __m256d d = _mm256_mul_pd(va, _mm256_loadu_pd(vals + k));
    change = _mm256_fmadd_pd(d, _mm256_fmadd_pd(half, d, y), change);
    _mm256_store_pd(updated, _mm256_add_pd(y, d));
    // No scatter in AVX2.
    dense[idx[k]] = updated[0];
    dense[idx[k + 1]] = updated[1];
    dense[idx[k + 2]] = updated[2];
    dense[idx[k + 3]] = updated[3];
  }
  double s = hsum(change);
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
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d zero = _mm256_setzero_pd();
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= nnz; k += 4) {
    const __m128i ix = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + k));
    const __m256d r = _mm256_i32gather_pd(dense, ix, 8);
    const __m256d h = _mm256_max_pd(zero, _mm256_add_pd(one, r));
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(vals + k), h, acc);
  }
  double s = hsum(acc);
  for (; k < nnz; ++k) s += vals[k] * std::max(0.0, 1.0 + dense[idx[k]]);
  return s;
}

const Table& table() {
  static const Table t{dot,          sum_squares,  abs_sum,     diff_dot_sum,
                       gather_dot,   scatter_axpy, gather_hinge};
  return t;
}

}  // namespace rcd::kernels::avx2
