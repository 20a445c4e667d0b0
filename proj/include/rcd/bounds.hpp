#pragma once

// Iteration complexity bounds for the coordinate descent methods, in both
// real-valued and integer (ceiling) form, plus small tools for validating
// them: the two-point random process, the deterministic recursion, and the
// strong convexity parameter of a dense least-squares problem.
//
// Every function throws std::invalid_argument when its preconditions fail.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rcd/rng.hpp"

namespace rcd {

// 1 - mu/4 for mu <= 2, 1/mu otherwise.
double gamma_mu(double mu);

enum class DecayProperty {
  quadratic,  // E[xi_{k+1} | xi_k] <= xi_k - xi_k^2 / c
  linear,     // E[xi_{k+1} | xi_k] <= (1 - 1/c) xi_k
};

// quadratic: c/eps (1 + log 1/rho) + 2 - c/xi0, needs 0 < eps < min(xi0, c)
// linear:    c log(xi0 / (eps rho)),         needs c > 1, 0 < eps < xi0
double k_theorem1_real(double c, double xi0, double eps, double rho, DecayProperty property);
std::uint64_t k_theorem1(double c, double xi0, double eps, double rho, DecayProperty property);

struct BoundPair {
  std::uint64_t a = 0;
  std::uint64_t b = 0;
};

// UCDC on convex F with R_sq = R_L^2(x0):
//   a: c = 2n max(R_sq, xi0) in the quadratic form; needs eps < xi0
//   b: 2n R_sq / eps * log(xi0 / (eps rho));        needs eps < min(R_sq, xi0)
double k_ucdc_convex_a_real(std::size_t n, double R_sq, double xi0, double eps, double rho);
double k_ucdc_convex_b_real(std::size_t n, double R_sq, double xi0, double eps, double rho);
BoundPair k_ucdc_convex(std::size_t n, double R_sq, double xi0, double eps, double rho);

// UCDC on strongly convex F: n / (1 - gamma_mu) * log(xi0 / (rho eps)).
double k_ucdc_strong_real(std::size_t n, double mu, double xi0, double eps, double rho);
std::uint64_t k_ucdc_strong(std::size_t n, double mu, double xi0, double eps, double rho);

// UCDC on the regularized objective with dist_sq = ||x0 - x*||_L^2:
// 4n dist_sq / eps * log(2 xi0 / (rho eps)); needs 0 < eps <= 2 dist_sq.
double k_regularized_real(std::size_t n, double dist_sq, double xi0, double eps, double rho);
std::uint64_t k_regularized(std::size_t n, double dist_sq, double xi0, double eps, double rho);

// RCDS on convex f with R_sq = R^2_{LP^-1}(x0), needs eps < min(xi0, 2 R_sq):
//   a: 2R_sq/eps (1 + log 1/rho) + 2 - 2R_sq/xi0
//   b: 2R_sq/eps (1 + log 1/rho) - 2
double k_rcds_convex_a_real(double R_sq, double xi0, double eps, double rho);
double k_rcds_convex_b_real(double R_sq, double xi0, double eps, double rho);
BoundPair k_rcds_convex(double R_sq, double xi0, double eps, double rho);

// RCDS on strongly convex f (0 < mu <= 1 w.r.t. ||.||_{LP^-1}):
// (1/mu) log(xi0 / (eps rho)); needs eps < xi0.
double k_rcds_strong_real(double mu, double xi0, double eps, double rho);
std::uint64_t k_rcds_strong(double mu, double xi0, double eps, double rho);

// ------------------------------------------------------------ validation

// xi_{k+1} = 0 with probability xi_k / c, else xi_k. Satisfies the
// quadratic decay property with equality; requires 0 < xi0 <= c.
struct TwoPointProcess {
  double c;
  double xi0;
  // Exact P(xi_K <= eps) for 0 < eps < xi0.
  double success_probability(std::uint64_t K) const;
  // Empirical frequency of xi_K <= eps over `paths` independent paths, each
  // simulated through its geometric jump time.
  double simulate(std::uint64_t K, double eps, std::uint64_t paths, CounterRng& rng) const;
};

// Number of steps of xi_{k+1} = xi_k - xi_k^2 / c until xi <= eps
// (stops at `cap`).
std::uint64_t deterministic_steps(double c, double xi0, double eps, std::uint64_t cap);

// Smallest eigenvalue of L^{-1/2} A^T A L^{-1/2} for dense row-major A
// (m x n) with L_i = ||a_i||^2 > 0: the strong convexity parameter of
// (1/2)||Ax - b||^2 w.r.t. ||.||_L. Inverse power iteration.
double strong_convexity_least_squares(std::span<const double> a, std::size_t m, std::size_t n,
                                      std::span<const double> lipschitz);

// --------------------------------------------------------- comparisons

struct ComparisonRow {
  std::string method;
  std::string constant;
  double leading_term = 0.0;  // (n/eps) sum_i const_i (u^(i))^2
};

// Leading complexity terms of the four methods compared in the literature
// table, for u = x* - x0 (per block squared norms `u_sq`).
std::vector<ComparisonRow> comparison_table(double lipschitz_full_gradient,
                                            std::span<const double> lipschitz,
                                            std::span<const double> u_sq, double eps);

}  // namespace rcd
