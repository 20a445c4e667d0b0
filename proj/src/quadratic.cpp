#include "rcd/quadratic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rcd {

double largest_eigenvalue(std::span<const double> m, std::size_t dim, std::size_t max_iter) {
  if (m.size() != dim * dim) throw std::invalid_argument("largest_eigenvalue: dimension mismatch");
  if (dim == 1) return m[0];
  std::vector<double> v(dim), w(dim);
  // Deterministic start with no special alignment to coordinate axes.
  for (std::size_t j = 0; j < dim; ++j) v[j] = 1.0 + 0.1 * static_cast<double>(j % 7);
  double rq = 0.0;
  for (std::size_t it = 0; it < max_iter; ++it) {
    double norm = 0.0;
    for (double e : v) norm += e * e;
    norm = std::sqrt(norm);
    if (norm == 0.0) return 0.0;
    for (double& e : v) e /= norm;
    for (std::size_t r = 0; r < dim; ++r) {
      double s = 0.0;
      for (std::size_t c = 0; c < dim; ++c) s += m[r * dim + c] * v[c];
      w[r] = s;
    }
    double next = 0.0;
    for (std::size_t j = 0; j < dim; ++j) next += v[j] * w[j];
    if (it > 10 && std::abs(next - rq) <= 1e-15 * std::abs(next)) return next;
    rq = next;
    v.swap(w);
  }
  return rq;
}

QuadraticOracle::QuadraticOracle(std::vector<double> q, std::vector<double> c, double constant,
                                 BlockPartition part, BlockNorm norm)
    : n_(c.size()),
      q_(std::move(q)),
      c_(std::move(c)),
      constant_(constant),
      part_(std::move(part)),
      norm_(std::move(norm)) {
  if (q_.size() != n_ * n_ || part_.dimension() != n_ || norm_.dimension() != n_)
    throw std::invalid_argument("QuadraticOracle: dimension mismatch");
  lipschitz_.resize(part_.num_blocks());
  for (std::size_t i = 0; i < part_.num_blocks(); ++i) {
    const std::size_t off = part_.offset(i), sz = part_.size(i);
    const auto b = norm_.block(part_, i);
    // L_i = lambda_max(B^{-1/2} Q_ii B^{-1/2})
    std::vector<double> sub(sz * sz);
    for (std::size_t r = 0; r < sz; ++r)
      for (std::size_t col = 0; col < sz; ++col)
        sub[r * sz + col] = q_[(off + r) * n_ + off + col] / std::sqrt(b[r] * b[col]);
    // Power iteration approaches from below; the small inflation keeps the
    // overestimation inequality valid.
    lipschitz_[i] = largest_eigenvalue(sub, sz) * (sz == 1 ? 1.0 : 1.0 + 1e-9);
  }
}

QuadraticOracle QuadraticOracle::least_squares(std::span<const double> a, std::size_t m,
                                               std::span<const double> b, BlockPartition part,
                                               BlockNorm norm) {
  const std::size_t n = part.dimension();
  if (a.size() != m * n || b.size() != m) throw std::invalid_argument("least_squares: dimension mismatch");
  std::vector<double> q(n * n, 0.0), c(n, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    const double* row = a.data() + r * n;
    for (std::size_t i = 0; i < n; ++i) {
      c[i] += row[i] * b[r];
      for (std::size_t j = 0; j < n; ++j) q[i * n + j] += row[i] * row[j];
    }
  }
  double bb = 0.0;
  for (double e : b) bb += e * e;
  return QuadraticOracle(std::move(q), std::move(c), 0.5 * bb, std::move(part), std::move(norm));
}

QuadraticOracle::State QuadraticOracle::make_state(std::span<const double> x0) const {
  if (x0.size() != n_) throw std::invalid_argument("QuadraticOracle: dimension mismatch");
  State s{std::vector<double>(x0.begin(), x0.end()), std::vector<double>(n_)};
  refresh(s);
  return s;
}

double QuadraticOracle::value(const State& s) const {
  double v = constant_;
  for (std::size_t j = 0; j < n_; ++j) v += 0.5 * s.x[j] * s.qx[j] - c_[j] * s.x[j];
  return v;
}

double QuadraticOracle::value_at(std::span<const double> x) const {
  if (x.size() != n_) throw std::invalid_argument("QuadraticOracle: dimension mismatch");
  double v = constant_;
  for (std::size_t r = 0; r < n_; ++r) {
    double qx = 0.0;
    for (std::size_t col = 0; col < n_; ++col) qx += q_[r * n_ + col] * x[col];
    v += 0.5 * x[r] * qx - c_[r] * x[r];
  }
  return v;
}

void QuadraticOracle::block_gradient(const State& s, std::size_t i, std::span<double> out) const {
  const std::size_t off = part_.offset(i);
  for (std::size_t j = 0; j < part_.size(i); ++j) out[j] = s.qx[off + j] - c_[off + j];
}

double QuadraticOracle::apply_step(State& s, std::size_t i, std::span<const double> t) const {
  const std::size_t off = part_.offset(i), sz = part_.size(i);
  // Exact change: <grad_i f, t> + (1/2) t^T Q_ii t.
  double lin = 0.0, quad = 0.0;
  for (std::size_t a = 0; a < sz; ++a) {
    lin += (s.qx[off + a] - c_[off + a]) * t[a];
    for (std::size_t b = 0; b < sz; ++b) quad += t[a] * q_[(off + a) * n_ + off + b] * t[b];
  }
  for (std::size_t a = 0; a < sz; ++a) {
    if (t[a] == 0.0) continue;
    s.x[off + a] += t[a];
    const double* col = q_.data() + (off + a) * n_;  // row == column by symmetry
    for (std::size_t r = 0; r < n_; ++r) s.qx[r] += col[r] * t[a];
  }
  return lin + 0.5 * quad;
}

double QuadraticOracle::refresh(State& s) const {
  double drift = 0.0;
  for (std::size_t r = 0; r < n_; ++r) {
    double qx = 0.0;
    for (std::size_t col = 0; col < n_; ++col) qx += q_[r * n_ + col] * s.x[col];
    drift = std::max(drift, std::abs(qx - s.qx[r]) / std::max(1.0, std::abs(qx)));
    s.qx[r] = qx;
  }
  return drift;
}

}  // namespace rcd
