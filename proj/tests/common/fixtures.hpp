#pragma once

// Small problem builders and numerical helpers shared by the unit tests and
// the acceptance runner.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "rcd/lasso.hpp"
#include "rcd/quadratic.hpp"
#include "rcd/rng.hpp"
#include "rcd/sparse.hpp"

namespace rcd::testing {

// Dense row-major m x n matrix with entries uniform in [-1, 1].
inline std::vector<double> random_dense(std::size_t m, std::size_t n, CounterRng& rng) {
  std::vector<double> a(m * n);
  for (auto& v : a) v = rng.uniform(-1.0, 1.0);
  return a;
}

inline std::vector<double> random_vector(std::size_t n, CounterRng& rng, double lo = -1.0,
                                         double hi = 1.0) {
  std::vector<double> v(n);
  for (auto& e : v) e = rng.uniform(lo, hi);
  return v;
}

// Dense row-major A (m x n) as a CSC matrix.
inline CscMatrix dense_to_csc(std::span<const double> a, std::size_t m, std::size_t n) {
  std::vector<Triplet> t;
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < n; ++c)
      if (a[r * n + c] != 0.0)
        t.push_back({static_cast<std::int32_t>(r), static_cast<std::int32_t>(c), a[r * n + c]});
  return CscMatrix::from_triplets(m, n, std::move(t));
}

// CSC matrix as dense row-major.
inline std::vector<double> csc_to_dense(const CscMatrix& A) {
  std::vector<double> a(A.rows() * A.cols(), 0.0);
  for (std::size_t c = 0; c < A.cols(); ++c) {
    const auto col = A.column(c);
    for (std::size_t k = 0; k < col.nnz(); ++k)
      a[static_cast<std::size_t>(col.index[k]) * A.cols() + c] = col.value[k];
  }
  return a;
}

// Lasso instance without certificate on a dense random matrix.
inline LassoInstance dense_lasso(std::size_t m, std::size_t n, double lambda, std::uint64_t seed) {
  CounterRng rng(seed, 7);
  const auto a = random_dense(m, n, rng);
  LassoInstance inst;
  inst.A = dense_to_csc(a, m, n);
  inst.b = random_vector(m, rng);
  inst.lambda = lambda;
  return inst;
}

// Central difference of `f` along coordinate j at x.
inline double central_difference(const std::function<double(std::span<const double>)>& f,
                                 std::vector<double> x, std::size_t j, double h) {
  const double x0 = x[j];
  x[j] = x0 + h;
  const double fp = f(x);
  x[j] = x0 - h;
  const double fm = f(x);
  return (fp - fm) / (2.0 * h);
}

inline double relative_gap(double a, double b) {
  return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

}  // namespace rcd::testing
