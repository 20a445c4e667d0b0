#include "rcd/bounds.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rcd {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

void check_common(double xi0, double eps, double rho) {
  require(std::isfinite(xi0) && xi0 > 0.0, "xi0 must be positive");
  require(std::isfinite(eps) && eps > 0.0, "eps must be positive");
  require(rho > 0.0 && rho < 1.0, "rho must lie in (0, 1)");
}

std::uint64_t to_count(double k) {
  if (!(k > 0.0)) return 0;
  const double c = std::ceil(k);
  require(c < 1.8e19, "bound exceeds the 64-bit iteration range");
  return static_cast<std::uint64_t>(c);
}

}  // namespace

double gamma_mu(double mu) {
  require(std::isfinite(mu) && mu > 0.0, "mu must be positive");
  return mu <= 2.0 ? 1.0 - mu / 4.0 : 1.0 / mu;
}

double k_theorem1_real(double c, double xi0, double eps, double rho, DecayProperty property) {
  check_common(xi0, eps, rho);
  require(std::isfinite(c) && c > 0.0, "c must be positive");
  require(eps < xi0, "eps must be below xi0");
  if (property == DecayProperty::quadratic) {
    require(eps < c, "eps must be below c");
    return c / eps * (1.0 + std::log(1.0 / rho)) + 2.0 - c / xi0;
  }
  require(c > 1.0, "c must exceed 1");
  return c * std::log(xi0 / (eps * rho));
}

std::uint64_t k_theorem1(double c, double xi0, double eps, double rho, DecayProperty property) {
  return to_count(k_theorem1_real(c, xi0, eps, rho, property));
}

double k_ucdc_convex_a_real(std::size_t n, double R_sq, double xi0, double eps, double rho) {
  check_common(xi0, eps, rho);
  require(n > 0, "n must be positive");
  require(std::isfinite(R_sq) && R_sq >= 0.0, "R_sq must be nonnegative");
  require(eps < xi0, "eps must be below xi0");
  const double c = 2.0 * static_cast<double>(n) * std::max(R_sq, xi0);
  return k_theorem1_real(c, xi0, eps, rho, DecayProperty::quadratic);
}

double k_ucdc_convex_b_real(std::size_t n, double R_sq, double xi0, double eps, double rho) {
  check_common(xi0, eps, rho);
  require(n > 0, "n must be positive");
  require(std::isfinite(R_sq) && R_sq >= 0.0, "R_sq must be nonnegative");
  require(eps < std::min(R_sq, xi0), "eps must be below min(R_sq, xi0)");
  return 2.0 * static_cast<double>(n) * R_sq / eps * std::log(xi0 / (eps * rho));
}

BoundPair k_ucdc_convex(std::size_t n, double R_sq, double xi0, double eps, double rho) {
  return {to_count(k_ucdc_convex_a_real(n, R_sq, xi0, eps, rho)),
          to_count(k_ucdc_convex_b_real(n, R_sq, xi0, eps, rho))};
}

double k_ucdc_strong_real(std::size_t n, double mu, double xi0, double eps, double rho) {
  check_common(xi0, eps, rho);
  require(n > 0, "n must be positive");
  return static_cast<double>(n) / (1.0 - gamma_mu(mu)) * std::log(xi0 / (rho * eps));
}

std::uint64_t k_ucdc_strong(std::size_t n, double mu, double xi0, double eps, double rho) {
  return to_count(k_ucdc_strong_real(n, mu, xi0, eps, rho));
}

double k_regularized_real(std::size_t n, double dist_sq, double xi0, double eps, double rho) {
  check_common(xi0, eps, rho);
  require(n > 0, "n must be positive");
  require(std::isfinite(dist_sq) && dist_sq > 0.0, "dist_sq must be positive");
  require(eps <= 2.0 * dist_sq, "eps must not exceed 2 dist_sq");
  return 4.0 * static_cast<double>(n) * dist_sq / eps * std::log(2.0 * xi0 / (rho * eps));
}

std::uint64_t k_regularized(std::size_t n, double dist_sq, double xi0, double eps, double rho) {
  return to_count(k_regularized_real(n, dist_sq, xi0, eps, rho));
}

namespace {
void check_rcds_convex(double R_sq, double xi0, double eps, double rho) {
  check_common(xi0, eps, rho);
  require(std::isfinite(R_sq) && R_sq > 0.0, "R_sq must be positive");
  require(eps < std::min(xi0, 2.0 * R_sq), "eps must be below min(xi0, 2 R_sq)");
}
}  // namespace

double k_rcds_convex_a_real(double R_sq, double xi0, double eps, double rho) {
  check_rcds_convex(R_sq, xi0, eps, rho);
  return 2.0 * R_sq / eps * (1.0 + std::log(1.0 / rho)) + 2.0 - 2.0 * R_sq / xi0;
}

double k_rcds_convex_b_real(double R_sq, double xi0, double eps, double rho) {
  check_rcds_convex(R_sq, xi0, eps, rho);
  return 2.0 * R_sq / eps * (1.0 + std::log(1.0 / rho)) - 2.0;
}

BoundPair k_rcds_convex(double R_sq, double xi0, double eps, double rho) {
  return {to_count(k_rcds_convex_a_real(R_sq, xi0, eps, rho)),
          to_count(k_rcds_convex_b_real(R_sq, xi0, eps, rho))};
}

double k_rcds_strong_real(double mu, double xi0, double eps, double rho) {
  check_common(xi0, eps, rho);
  require(std::isfinite(mu) && mu > 0.0 && mu <= 1.0, "mu must lie in (0, 1]");
  require(eps < xi0, "eps must be below xi0");
  return std::log(xi0 / (eps * rho)) / mu;
}

std::uint64_t k_rcds_strong(double mu, double xi0, double eps, double rho) {
  return to_count(k_rcds_strong_real(mu, xi0, eps, rho));
}

double TwoPointProcess::success_probability(std::uint64_t K) const {
  require(xi0 > 0.0 && xi0 <= c, "two-point process needs 0 < xi0 <= c");
  const double p = xi0 / c;
  if (p >= 1.0) return K > 0 ? 1.0 : 0.0;
  return -std::expm1(static_cast<double>(K) * std::log1p(-p));
}

double TwoPointProcess::simulate(std::uint64_t K, double eps, std::uint64_t paths,
                                 CounterRng& rng) const {
  require(xi0 > 0.0 && xi0 <= c, "two-point process needs 0 < xi0 <= c");
  require(paths > 0, "paths must be positive");
  if (eps >= xi0) return 1.0;
  const double p = xi0 / c;
  const double log_q = std::log1p(-p);
  std::uint64_t hits = 0;
  for (std::uint64_t j = 0; j < paths; ++j) {
    // Jump time T >= 1 is geometric: P(T > k) = (1-p)^k.
    std::uint64_t T = 1;
    if (p < 1.0) {
      const double u = 1.0 - rng.uniform01();  // (0, 1]
      const double t = std::ceil(std::log(u) / log_q);
      T = t < 1.0 ? 1 : (t > 1.8e19 ? std::numeric_limits<std::uint64_t>::max()
                                    : static_cast<std::uint64_t>(t));
    }
    hits += (T <= K);
  }
  return static_cast<double>(hits) / static_cast<double>(paths);
}

std::uint64_t deterministic_steps(double c, double xi0, double eps, std::uint64_t cap) {
  require(c > 0.0 && xi0 > 0.0 && xi0 <= c && eps > 0.0, "invalid recursion parameters");
  double xi = xi0;
  std::uint64_t k = 0;
  while (xi > eps && k < cap) {
    xi -= xi * xi / c;
    ++k;
  }
  return k;
}

double strong_convexity_least_squares(std::span<const double> a, std::size_t m, std::size_t n,
                                      std::span<const double> lipschitz) {
  require(a.size() == m * n && lipschitz.size() == n, "dimension mismatch");
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> A(
      a.data(), static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  Eigen::VectorXd scale(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    require(lipschitz[i] > 0.0, "lipschitz constants must be positive");
    scale[static_cast<Eigen::Index>(i)] = 1.0 / std::sqrt(lipschitz[i]);
  }
  const Eigen::MatrixXd As = A * scale.asDiagonal();
  const Eigen::MatrixXd M = As.transpose() * As;
  Eigen::LLT<Eigen::MatrixXd> llt(M);
  if (llt.info() != Eigen::Success) return 0.0;  // singular: not strongly convex
  Eigen::VectorXd v = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n));
  for (Eigen::Index j = 0; j < v.size(); ++j) v[j] += 0.01 * static_cast<double>(j % 11);
  v.normalize();
  double prev = 0.0, rq = 0.0;
  for (int it = 0; it < 10000; ++it) {
    Eigen::VectorXd w = llt.solve(v);
    w.normalize();
    rq = w.dot(M * w);
    v = std::move(w);
    if (it > 5 && std::abs(rq - prev) <= 1e-14 * rq) break;
    prev = rq;
  }
  return rq;
}

std::vector<ComparisonRow> comparison_table(double lipschitz_full_gradient,
                                            std::span<const double> lipschitz,
                                            std::span<const double> u_sq, double eps) {
  require(lipschitz.size() == u_sq.size(), "dimension mismatch");
  require(eps > 0.0, "eps must be positive");
  const double n = static_cast<double>(lipschitz.size());
  double beta = 0.0, sum_u = 0.0, sum_lu = 0.0;
  for (std::size_t i = 0; i < lipschitz.size(); ++i) {
    beta = std::max(beta, lipschitz[i]);
    sum_u += u_sq[i];
    sum_lu += lipschitz[i] * u_sq[i];
  }
  const double scale = n / eps;
  return {
      {"Yun-Tseng (greedy)", "L(grad f)", scale * lipschitz_full_gradient * sum_u},
      {"Saha-Tewari (cyclic)", "L(grad f)", scale * lipschitz_full_gradient * sum_u},
      {"Shalev-Shwartz-Tewari (uniform)", "beta = max L_i", scale * beta * sum_u},
      {"UCDC (uniform)", "L_i", scale * sum_lu},
  };
}

}  // namespace rcd
