#include "rcd/solvers.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rcd {

RestartPlan restart_plan(double c, double xi0, double eps, double rho) {
  if (!(c > 0.0) || !(xi0 > 0.0)) throw std::invalid_argument("restart_plan: c and xi0 must be positive");
  if (!(eps > 0.0)) throw std::invalid_argument("restart_plan: eps must be positive");
  if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("restart_plan: rho must lie in (0, 1)");
  const double k1 = std::ceil(std::numbers::e * c / eps - c / xi0);
  const double r = std::ceil(std::log(1.0 / rho));
  return {static_cast<std::uint64_t>(std::max(1.0, r)), static_cast<std::uint64_t>(std::max(0.0, k1))};
}

double regularization_mu(double eps, double dist_sq) {
  if (!(dist_sq > 0.0)) throw std::invalid_argument("regularization: dist_sq must be positive");
  if (!(eps > 0.0 && eps <= 2.0 * dist_sq))
    throw std::invalid_argument("regularization: eps must lie in (0, 2 dist_sq]");
  return eps / dist_sq;
}

}  // namespace rcd
