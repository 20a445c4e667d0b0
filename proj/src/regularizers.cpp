#include "rcd/regularizers.hpp"

#include <cmath>
#include <stdexcept>

#include "rcd/errors.hpp"

namespace rcd {

void ZeroRegularizer::block_minimize(std::size_t, std::span<const double> x,
                                     std::span<const double> g, double L,
                                     std::span<const double> b, std::span<double> t) const {
  if (L > 0.0) {
    for (std::size_t j = 0; j < x.size(); ++j) t[j] = -g[j] / (b[j] * L);
    return;
  }
  // L = 0: f is constant along the block, so any point is optimal iff g = 0.
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (g[j] != 0.0) throw NumericalError("block subproblem unbounded (L_i = 0, g_i != 0)");
    t[j] = 0.0;
  }
}

L1Regularizer::L1Regularizer(double lambda) : lambda_(lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("L1Regularizer: lambda must be finite and >= 0");
}

L1Regularizer L1Regularizer::with_proximal_term(double lambda, double mu, std::vector<double> center,
                                                std::span<const double> lipschitz,
                                                const BlockPartition& part, const BlockNorm& bn) {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw std::invalid_argument("L1Regularizer: mu must be > 0");
  if (center.size() != part.dimension() || lipschitz.size() != part.num_blocks() ||
      bn.dimension() != part.dimension())
    throw std::invalid_argument("L1Regularizer: dimension mismatch");
  L1Regularizer r(lambda);
  r.mu_ = mu;
  r.center_ = std::move(center);
  r.prox_weight_.resize(part.dimension());
  r.offsets_.assign(part.offsets().begin(), part.offsets().end());
  for (std::size_t i = 0; i < part.num_blocks(); ++i) {
    const auto b = bn.block(part, i);
    for (std::size_t j = 0; j < b.size(); ++j)
      r.prox_weight_[part.offset(i) + j] = mu * lipschitz[i] * b[j];
  }
  return r;
}

double L1Regularizer::block_value_prox(std::size_t i, std::span<const double> v) const {
  const std::size_t off = offsets_[i];
  double l1 = 0.0, quad = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    l1 += std::abs(v[j]);
    const double d = v[j] - center_[off + j];
    quad += prox_weight_[off + j] * d * d;
  }
  return lambda_ * l1 + 0.5 * quad;
}

void L1Regularizer::block_minimize_general(std::size_t i, std::span<const double> x,
                                           std::span<const double> g, double L,
                                           std::span<const double> b,
                                           std::span<double> t) const {
  const bool prox = !prox_weight_.empty();
  const std::size_t off = prox ? offsets_[i] : 0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double w = prox ? prox_weight_[off + j] : 0.0;
    const double curv = L * b[j];
    if (!prox) {
      if (curv > 0.0) {
        t[j] = l1_block_step(x[j], g[j], lambda_, curv);
      } else {
        // Linear model g*t + lambda|x+t|: bounded only when |g| <= lambda.
        if (std::abs(g[j]) > lambda_) throw NumericalError("block subproblem unbounded (L_i = 0, |g| > lambda)");
        t[j] = -x[j];
      }
      continue;
    }
    // In u = x + t the model is (a/2) u^2 - c u + lambda|u| + const with
    // a = curv + w, c = curv*x + w*centre - g.
    const double a = curv + w;
    const double c = curv * x[j] + w * center_[off + j] - g[j];
    if (!(a > 0.0)) {
      if (std::abs(c) > lambda_) throw NumericalError("block subproblem unbounded");
      t[j] = -x[j];
      continue;
    }
    double u = 0.0;
    if (c > lambda_) u = (c - lambda_) / a;
    else if (c < -lambda_) u = (c + lambda_) / a;
    t[j] = u - x[j];
  }
}

}  // namespace rcd
