#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace rcd {

struct Triplet {
  std::int32_t row;
  std::int32_t col;
  double value;
};

struct SparseColumn {
  std::span<const std::int32_t> index;
  std::span<const double> value;
  std::size_t nnz() const { return index.size(); }
};

// Compressed sparse column matrix. Row indices are 32-bit so the gather
// kernels can use them directly; within a column they are strictly
// increasing.
class CscMatrix {
 public:
  CscMatrix() = default;
  CscMatrix(std::size_t rows, std::size_t cols, std::vector<std::int64_t> col_ptr,
            std::vector<std::int32_t> row_idx, std::vector<double> values);

  // Duplicate (row, col) pairs are rejected. Explicit zeros are kept.
  static CscMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> entries);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }

  SparseColumn column(std::size_t j) const {
    const auto b = static_cast<std::size_t>(col_ptr_[j]);
    const auto e = static_cast<std::size_t>(col_ptr_[j + 1]);
    return {std::span<const std::int32_t>(row_idx_).subspan(b, e - b),
            std::span<const double>(values_).subspan(b, e - b)};
  }
  std::size_t column_nnz(std::size_t j) const {
    return static_cast<std::size_t>(col_ptr_[j + 1] - col_ptr_[j]);
  }

  std::span<const std::int64_t> col_ptr() const { return col_ptr_; }
  std::span<const std::int32_t> row_idx() const { return row_idx_; }
  std::span<const double> values() const { return values_; }
  std::span<double> mutable_values() { return values_; }

  // ||a_j||^2 for every column.
  std::vector<double> column_sq_norms() const;

  // y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;
  // out = A^T y
  void multiply_transpose(std::span<const double> y, std::span<double> out) const;

  CscMatrix transpose() const;

  friend bool operator==(const CscMatrix&, const CscMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::int64_t> col_ptr_{0};
  std::vector<std::int32_t> row_idx_;
  std::vector<double> values_;
};

}  // namespace rcd
