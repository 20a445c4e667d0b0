#include "kernels_impl.hpp"

#include <algorithm>
#include <cmath>

namespace rcd::kernels::scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += a[k] * b[k];
  return s;
}

double sum_squares(const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += a[k] * a[k];
  return s;
}

double abs_sum(const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += std::abs(a[k]);
  return s;
}

double diff_dot_sum(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += (a[k] - b[k]) * (a[k] + b[k]);
  return s;
}

double gather_dot(const double* vals, const std::int32_t* idx, std::size_t nnz,
                  const double* dense) {
  double s = 0.0;
  for (std::size_t k = 0; k < nnz; ++k) s += vals[k] * dense[idx[k]];
  return s;
}

double scatter_axpy(double alpha, const double* vals, const std::int32_t* idx,
                    std::size_t nnz, double* dense) {
  double change = 0.0;
  for (std::size_t k = 0; k < nnz; ++k) {
    const double d = alpha * vals[k];
    double& y = dense[idx[k]];
    change += d * (y + 0.5 * d);
    y += d;
  }
  return change;
}

double gather_hinge(const double* vals, const std::int32_t* idx,
                    std::size_t nnz, const double* dense) {
  double s = 0.0;
  for (std::size_t k = 0; k < nnz; ++k)
    s += vals[k] * std::max(0.0, 1.0 + dense[idx[k]]);
  return s;
}

const Table& table() {
  static const Table t{dot,          sum_squares,  abs_sum,     diff_dot_sum,
                       gather_dot,   scatter_axpy, gather_hinge};
  return t;
}

}  // namespace rcd::kernels::scalar
