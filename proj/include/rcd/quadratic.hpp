#pragma once

// Dense quadratic f(x) = (1/2) x^T Q x - c^T x + const with arbitrary block
// structure and diagonal block norms. Small-scale testbed for the smooth
// solver, multi-coordinate blocks and the non-Euclidean sharp step.

#include <cstddef>
#include <span>
#include <vector>

#include "rcd/blocks.hpp"

namespace rcd {

class QuadraticOracle {
 public:
  struct State {
    std::vector<double> x;
    std::vector<double> qx;  // Q x
  };

  // q is row-major N x N symmetric positive semidefinite.
  QuadraticOracle(std::vector<double> q, std::vector<double> c, double constant,
                  BlockPartition part, BlockNorm norm);

  // f(x) = (1/2)||A x - b||^2 for dense row-major A (m x N).
  static QuadraticOracle least_squares(std::span<const double> a, std::size_t m,
                                       std::span<const double> b, BlockPartition part,
                                       BlockNorm norm);

  const BlockPartition& partition() const { return part_; }
  const BlockNorm& block_norm() const { return norm_; }
  std::span<const double> lipschitz() const { return lipschitz_; }
  std::size_t dimension() const { return n_; }
  std::span<const double> matrix() const { return q_; }
  std::span<const double> linear() const { return c_; }

  State make_state(std::span<const double> x0) const;
  double value(const State& s) const;
  double value_at(std::span<const double> x) const;
  void block_gradient(const State& s, std::size_t i, std::span<double> out) const;
  double apply_step(State& s, std::size_t i, std::span<const double> t) const;
  double refresh(State& s) const;

 private:
  std::size_t n_;
  std::vector<double> q_;
  std::vector<double> c_;
  double constant_;
  BlockPartition part_;
  BlockNorm norm_;
  std::vector<double> lipschitz_;
};

// Largest eigenvalue of a small symmetric PSD matrix (row-major, dim x dim)
// by power iteration; the Rayleigh quotient is returned once it stalls.
double largest_eigenvalue(std::span<const double> m, std::size_t dim, std::size_t max_iter = 5000);

}  // namespace rcd
