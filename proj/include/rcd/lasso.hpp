#pragma once

// L1-regularized least squares  F(x) = (1/2)||Ax - b||^2 + lambda ||x||_1
// with single-coordinate blocks, L_i = ||a_i||^2, and the residual
// g = Ax - b maintained incrementally so one iteration touches only the
// nonzeros of one column.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rcd/blocks.hpp"
#include "rcd/framework.hpp"
#include "rcd/regularizers.hpp"
#include "rcd/sparse.hpp"

namespace rcd {

struct LassoCertificate {
  std::vector<std::uint32_t> support;  // strictly increasing
  std::vector<double> values;          // x*_i on the support, all nonzero
  double optimal_value = 0.0;          // F*
  friend bool operator==(const LassoCertificate&, const LassoCertificate&) = default;
};

struct LassoInstance {
  CscMatrix A;
  std::vector<double> b;
  double lambda = 0.0;
  std::optional<LassoCertificate> certificate;

  std::size_t rows() const { return A.rows(); }
  std::size_t cols() const { return A.cols(); }
  std::vector<double> dense_solution() const;  // x* as a length-n vector
  friend bool operator==(const LassoInstance&, const LassoInstance&) = default;
};

// max_i dist(a_i^T (A x* - b), -lambda d|x*_i|) / max(lambda, 1), and the
// relative error of the stored F*.
struct CertificateCheck {
  double optimality_residual = 0.0;
  double value_error = 0.0;
  bool passed(double tol = 1e-9) const { return optimality_residual <= tol && value_error <= 1e-12; }
};
CertificateCheck verify_certificate(const LassoInstance& inst);

class LassoOracle {
 public:
  struct State {
    std::vector<double> x;
    std::vector<double> g;         // A x - b
    mutable std::uint64_t touches = 0;  // residual entries read or written
  };

  explicit LassoOracle(const LassoInstance& inst);

  const LassoInstance& instance() const { return *inst_; }
  const BlockPartition& partition() const { return part_; }
  const BlockNorm& block_norm() const { return norm_; }
  std::span<const double> lipschitz() const { return lipschitz_; }

  State make_state(std::span<const double> x0) const;
  double value(const State& s) const;
  double value_at(std::span<const double> x) const;
  std::vector<double> residual_at(std::span<const double> x) const;

  void block_gradient(const State& s, std::size_t i, std::span<double> out) const {
    out[0] = partial(s, i);
  }
  double partial(const State& s, std::size_t i) const;
  void prefetch(const State& s, std::size_t i, int stage) const {
    const auto col = inst_->A.column(i);
    if (stage == 0) {
      __builtin_prefetch(&s.x[i]);
      __builtin_prefetch(col.index.data());
      __builtin_prefetch(col.value.data());
      return;
    }
    for (std::size_t k = 0; k < col.nnz() && k < 16; ++k) __builtin_prefetch(&s.g[static_cast<std::size_t>(col.index[k])]);
  }
  double apply_step(State& s, std::size_t i, std::span<const double> t) const;
  double refresh(State& s) const;

 private:
  const LassoInstance* inst_;
  BlockPartition part_;
  BlockNorm norm_;
  std::vector<double> lipschitz_;
};

// The composite Lasso problem. With a certificate it reports F(x) - F*
// directly from (g - r*) and (|x| - |x*|), avoiding cancellation between
// two large objective values, and the support agreement counts.
class LassoProblem {
 public:
  using Oracle = LassoOracle;
  using Regularizer = L1Regularizer;

  explicit LassoProblem(const LassoInstance& inst);

  const LassoOracle& oracle() const { return oracle_; }
  const L1Regularizer& regularizer() const { return reg_; }
  const LassoInstance& instance() const { return oracle_.instance(); }
  std::optional<double> optimal_value() const;

  std::optional<double> objective_gap(const SolverState<LassoOracle>& s) const;
  // (correct nonzeros, incorrect zeros) with respect to supp(x*).
  std::optional<std::pair<std::size_t, std::size_t>> support_counts(
      const SolverState<LassoOracle>& s) const;

 private:
  LassoOracle oracle_;
  L1Regularizer reg_;
  std::vector<double> r_star_;  // A x* - b
  std::vector<double> x_star_;
  double x_star_l1_ = 0.0;
};

// ---------------------------------------------------------------- generator

enum class LipschitzProfile {
  natural,      // whatever the construction produces
  uniform,      // L_i uniform in (0, 1)
  log_uniform,  // log10 L_i uniform in [lo, hi]
  two_level,    // each column at log10 L_i = lo with probability low_fraction, else hi
};

struct GeneratorOptions {
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t nnz_a = 0;
  std::size_t nnz_x = 0;
  double lambda = 1.0;
  std::uint64_t seed = 0;
  // Column rescaling; only allowed with lambda = 0, where it preserves
  // optimality of x*.
  LipschitzProfile profile = LipschitzProfile::natural;
  double profile_lo = -3.0;
  double profile_hi = 3.0;
  double low_fraction = 0.5;
};

// A random instance together with an optimal point x* and F*.
//   1. A: nnz_a entries uniform in [-1, 1], at least one per column
//   2. x*: nnz_x nonzeros uniform in [-1, 1]
//   3. r: entries uniform in [-1, 1] (r = 0 when lambda = 0)
//   4. columns on supp(x*) rescaled to a_i^T r = -lambda sign(x*_i); off
//      the support, columns with |a_i^T r| > lambda rescaled to
//      |a_i^T r| = lambda u, u uniform in (0, 1]
//   5. b = A x* - r and F* = (1/2)||r||^2 + lambda ||x*||_1
// Throws std::invalid_argument for infeasible sparsity parameters.
LassoInstance generate_lasso(const GeneratorOptions& opt);

// -------------------------------------------------------------------- I/O

// Binary container (little-endian, magic "RCDLASSO") and a line-oriented
// text form; both round-trip bit-exactly. Throws IoError.
void write_lasso_binary(const LassoInstance& inst, const std::filesystem::path& path);
void write_lasso_text(const LassoInstance& inst, const std::filesystem::path& path);
LassoInstance read_lasso(const std::filesystem::path& path);  // detects the format

// Approximate least-squares point argmin (1/2)||Ax - b||^2: the smooth
// method with uniform sampling from x = 0 for `max_epochs` epochs.
std::vector<double> least_squares_start(const LassoInstance& inst, double max_epochs,
                                        std::uint64_t seed);

}  // namespace rcd
