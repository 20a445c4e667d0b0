#pragma once

// Stand-alone evaluator of the iteration bounds, written directly from the
// closed forms without sharing code with the library. Returns -1 when a
// precondition fails.

#include <cmath>
#include <cstdint>

namespace reference {

inline std::int64_t ceil_count(double v) {
  const double c = std::ceil(v);
  return c < 0.0 ? 0 : static_cast<std::int64_t>(c);
}

inline double gamma(double mu) {
  if (mu <= 0) return -1;
  return mu <= 2 ? 1 - mu / 4 : 1 / mu;
}

inline bool common_ok(double xi0, double eps, double rho) {
  return eps > 0 && xi0 > 0 && rho > 0 && rho < 1;
}

// Decay E[xi'] <= xi - xi^2/c.
inline std::int64_t theorem1_quadratic(double c, double xi0, double eps, double rho) {
  if (!common_ok(xi0, eps, rho) || !(c > 0) || !(eps < xi0) || !(eps < c)) return -1;
  const double log_inv_rho = -std::log(rho);
  return ceil_count(c * (1 + log_inv_rho) / eps + 2 - c / xi0);
}

// Decay E[xi'] <= (1 - 1/c) xi.
inline std::int64_t theorem1_linear(double c, double xi0, double eps, double rho) {
  if (!common_ok(xi0, eps, rho) || !(c > 1) || !(eps < xi0)) return -1;
  return ceil_count(c * (std::log(xi0) - std::log(eps) - std::log(rho)));
}

inline std::int64_t ucdc_convex_a(double n, double r_sq, double xi0, double eps, double rho) {
  const double c = 2 * n * (r_sq > xi0 ? r_sq : xi0);
  return theorem1_quadratic(c, xi0, eps, rho);
}

inline std::int64_t ucdc_convex_b(double n, double r_sq, double xi0, double eps, double rho) {
  if (!common_ok(xi0, eps, rho) || !(eps < r_sq) || !(eps < xi0)) return -1;
  return ceil_count(2 * n * r_sq / eps * (std::log(xi0) - std::log(eps) - std::log(rho)));
}

inline std::int64_t ucdc_strong(double n, double mu, double xi0, double eps, double rho) {
  const double g = gamma(mu);
  if (g < 0 || !common_ok(xi0, eps, rho)) return -1;
  return ceil_count(n / (1 - g) * (std::log(xi0) - std::log(rho) - std::log(eps)));
}

inline std::int64_t regularized(double n, double d_sq, double xi0, double eps, double rho) {
  if (!common_ok(xi0, eps, rho) || !(d_sq > 0) || eps > 2 * d_sq) return -1;
  return ceil_count(4 * n * d_sq / eps * (std::log(2.0) + std::log(xi0) - std::log(rho) - std::log(eps)));
}

inline std::int64_t rcds_convex_a(double r_sq, double xi0, double eps, double rho) {
  if (!common_ok(xi0, eps, rho) || !(eps < xi0) || !(eps < 2 * r_sq)) return -1;
  return ceil_count(2 * r_sq * (1 - std::log(rho)) / eps + 2 - 2 * r_sq / xi0);
}

inline std::int64_t rcds_convex_b(double r_sq, double xi0, double eps, double rho) {
  if (!common_ok(xi0, eps, rho) || !(eps < xi0) || !(eps < 2 * r_sq)) return -1;
  return ceil_count(2 * r_sq * (1 - std::log(rho)) / eps - 2);
}

inline std::int64_t rcds_strong(double mu, double xi0, double eps, double rho) {
  if (!common_ok(xi0, eps, rho) || !(mu > 0) || mu > 1 || !(eps < xi0)) return -1;
  return ceil_count((std::log(xi0) - std::log(eps) - std::log(rho)) / mu);
}

}  // namespace reference
