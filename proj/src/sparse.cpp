#include "rcd/sparse.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "rcd/kernels.hpp"

namespace rcd {

CscMatrix::CscMatrix(std::size_t rows, std::size_t cols, std::vector<std::int64_t> col_ptr,
                     std::vector<std::int32_t> row_idx, std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      col_ptr_(std::move(col_ptr)),
      row_idx_(std::move(row_idx)),
      values_(std::move(values)) {
  if (rows_ > static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max()))
    throw std::invalid_argument("CscMatrix: too many rows for 32-bit indices");
  if (col_ptr_.size() != cols_ + 1 || col_ptr_.front() != 0 ||
      static_cast<std::size_t>(col_ptr_.back()) != values_.size() ||
      row_idx_.size() != values_.size())
    throw std::invalid_argument("CscMatrix: inconsistent compressed layout");
  for (std::size_t j = 0; j < cols_; ++j) {
    if (col_ptr_[j + 1] < col_ptr_[j]) throw std::invalid_argument("CscMatrix: decreasing column pointers");
    for (auto k = col_ptr_[j]; k < col_ptr_[j + 1]; ++k) {
      const auto r = row_idx_[static_cast<std::size_t>(k)];
      if (r < 0 || static_cast<std::size_t>(r) >= rows_)
        throw std::invalid_argument("CscMatrix: row index out of range");
      if (k > col_ptr_[j] && row_idx_[static_cast<std::size_t>(k - 1)] >= r)
        throw std::invalid_argument("CscMatrix: row indices must be strictly increasing per column");
    }
  }
}

CscMatrix CscMatrix::from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> entries) {
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.col != b.col ? a.col < b.col : a.row < b.row;
  });
  std::vector<std::int64_t> ptr(cols + 1, 0);
  std::vector<std::int32_t> idx;
  std::vector<double> val;
  idx.reserve(entries.size());
  val.reserve(entries.size());
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& e = entries[k];
    if (e.col < 0 || static_cast<std::size_t>(e.col) >= cols || e.row < 0 ||
        static_cast<std::size_t>(e.row) >= rows)
      throw std::invalid_argument("CscMatrix::from_triplets: entry out of range");
    if (k > 0 && entries[k - 1].col == e.col && entries[k - 1].row == e.row)
      throw std::invalid_argument("CscMatrix::from_triplets: duplicate entry");
    ++ptr[static_cast<std::size_t>(e.col) + 1];
    idx.push_back(e.row);
    val.push_back(e.value);
  }
  for (std::size_t j = 0; j < cols; ++j) ptr[j + 1] += ptr[j];
  return CscMatrix(rows, cols, std::move(ptr), std::move(idx), std::move(val));
}

std::vector<double> CscMatrix::column_sq_norms() const {
  std::vector<double> out(cols_);
  const auto& k = kernels::active();
  for (std::size_t j = 0; j < cols_; ++j) {
    const auto col = column(j);
    out[j] = k.sum_squares(col.value.data(), col.nnz());
  }
  return out;
}

void CscMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != cols_ || y.size() != rows_) throw std::invalid_argument("CscMatrix::multiply: dimension mismatch");
  std::fill(y.begin(), y.end(), 0.0);
  const auto& k = kernels::active();
  for (std::size_t j = 0; j < cols_; ++j) {
    if (x[j] == 0.0) continue;
    const auto col = column(j);
    k.scatter_axpy(x[j], col.value.data(), col.index.data(), col.nnz(), y.data());
  }
}

void CscMatrix::multiply_transpose(std::span<const double> y, std::span<double> out) const {
  if (y.size() != rows_ || out.size() != cols_)
    throw std::invalid_argument("CscMatrix::multiply_transpose: dimension mismatch");
  const auto& k = kernels::active();
  for (std::size_t j = 0; j < cols_; ++j) {
    const auto col = column(j);
    out[j] = k.gather_dot(col.value.data(), col.index.data(), col.nnz(), y.data());
  }
}

CscMatrix CscMatrix::transpose() const {
  std::vector<std::int64_t> ptr(rows_ + 1, 0);
  for (auto r : row_idx_) ++ptr[static_cast<std::size_t>(r) + 1];
  for (std::size_t i = 0; i < rows_; ++i) ptr[i + 1] += ptr[i];
  std::vector<std::int32_t> idx(values_.size());
  std::vector<double> val(values_.size());
  std::vector<std::int64_t> next(ptr.begin(), ptr.end() - 1);
  for (std::size_t j = 0; j < cols_; ++j) {
    for (auto k = col_ptr_[j]; k < col_ptr_[j + 1]; ++k) {
      const auto r = static_cast<std::size_t>(row_idx_[static_cast<std::size_t>(k)]);
      const auto dst = static_cast<std::size_t>(next[r]++);
      idx[dst] = static_cast<std::int32_t>(j);
      val[dst] = values_[static_cast<std::size_t>(k)];
    }
  }
  return CscMatrix(cols_, rows_, std::move(ptr), std::move(idx), std::move(val));
}

}  // namespace rcd
