#pragma once

// Block-separable regularizers Psi(x) = sum_i Psi_i(x^(i)) with exact block
// minimizers of
//
//   V_i(x, t) = <g_i, t> + (L_i/2) ||t||_(i)^2 + Psi_i(x^(i) + t).
//
// block_minimize receives only the block data (x_i, g_i, L_i, b_i), so a
// regularizer cannot couple blocks.

#include <cstddef>
#include <span>
#include <vector>

#include "rcd/blocks.hpp"

namespace rcd {

// Closed-form minimizer over t of  alpha*t + (L/2) t^2 + lambda*|x + t|,
// L > 0, written as three mutually exclusive branches. Exact ties of the
// first two tests fall through to t = -x.
inline double l1_block_step(double x, double alpha, double lambda, double L) {
  const double plus = (alpha + lambda) / L;
  if (x - plus > 0.0) return -plus;
  const double minus = (alpha - lambda) / L;
  if (x - minus < 0.0) return -minus;
  return -x;
}

// Psi == 0. The block step is t = -(1/L) g^#.
class ZeroRegularizer {
 public:
  static constexpr bool is_zero() { return true; }
  double block_value(std::size_t, std::span<const double>) const { return 0.0; }
  void block_minimize(std::size_t i, std::span<const double> x, std::span<const double> g,
                      double L, std::span<const double> b, std::span<double> t) const;
};

// Psi(x) = lambda ||x||_1 + (mu/2) ||x - c||_L^2 where the optional proximal
// term uses ||v||_L^2 = sum_i L_i ||v^(i)||_(i)^2. With mu = 0 this is the
// plain l1 penalty; with mu > 0 it is the strongly convex regularized
// objective F_mu - f.
class L1Regularizer {
 public:
  explicit L1Regularizer(double lambda = 1.0);

  static L1Regularizer with_proximal_term(double lambda, double mu, std::vector<double> center,
                                          std::span<const double> lipschitz,
                                          const BlockPartition& part, const BlockNorm& bn);

  double lambda() const { return lambda_; }
  double mu() const { return mu_; }
  bool has_proximal_term() const { return !prox_weight_.empty(); }
  bool is_zero() const { return lambda_ == 0.0 && !has_proximal_term(); }

  double block_value(std::size_t i, std::span<const double> v) const {
    if (prox_weight_.empty()) {
      if (v.size() == 1) return lambda_ * (v[0] < 0 ? -v[0] : v[0]);
      double s = 0.0;
      for (double e : v) s += e < 0 ? -e : e;
      return lambda_ * s;
    }
    return block_value_prox(i, v);
  }

  void block_minimize(std::size_t i, std::span<const double> x, std::span<const double> g,
                      double L, std::span<const double> b, std::span<double> t) const {
    if (prox_weight_.empty() && x.size() == 1 && L > 0.0) {
      t[0] = l1_block_step(x[0], g[0], lambda_, L * b[0]);
      return;
    }
    block_minimize_general(i, x, g, L, b, t);
  }

 private:
  double block_value_prox(std::size_t i, std::span<const double> v) const;
  void block_minimize_general(std::size_t i, std::span<const double> x,
                              std::span<const double> g, double L, std::span<const double> b,
                              std::span<double> t) const;

  double lambda_;
  double mu_ = 0.0;
  // Per-coordinate mu * L_i * b_j and the centre, both length N, empty
  // without a proximal term.
  std::vector<double> prox_weight_;
  std::vector<double> center_;
  std::vector<std::size_t> offsets_;
};

}  // namespace rcd
