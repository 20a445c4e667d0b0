#pragma once

// Composite problems F(x) = f(x) + Psi(x) and the block operations shared by
// all solvers.
//
// A smooth oracle owns every problem cache (residuals, margins, Qx); its
// apply_step is the only way an iterate changes, and it reports the exact
// change of f computed from the entries it touched. A SolverState wraps the
// oracle state with the incrementally maintained f and Psi values and the
// block support set.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

#include "rcd/blocks.hpp"
#include "rcd/errors.hpp"
#include "rcd/regularizers.hpp"
#include "rcd/support.hpp"

namespace rcd {

template <class O>
concept SmoothOracle = requires(const O& o, typename O::State& s, const typename O::State& cs,
                                std::size_t i, std::span<double> out,
                                std::span<const double> t) {
  { cs.x } -> std::convertible_to<const std::vector<double>&>;
  { o.partition() } -> std::same_as<const BlockPartition&>;
  { o.block_norm() } -> std::same_as<const BlockNorm&>;
  { o.lipschitz() } -> std::convertible_to<std::span<const double>>;
  { o.make_state(t) } -> std::same_as<typename O::State>;
  { o.value(cs) } -> std::convertible_to<double>;
  { o.value_at(t) } -> std::convertible_to<double>;
  o.block_gradient(cs, i, out);
  { o.apply_step(s, i, t) } -> std::convertible_to<double>;
  { o.refresh(s) } -> std::convertible_to<double>;
};

template <class R>
concept SeparableRegularizer = requires(const R& r, std::size_t i, std::span<const double> v,
                                        double L, std::span<double> t) {
  { r.block_value(i, v) } -> std::convertible_to<double>;
  r.block_minimize(i, v, v, L, v, t);
  { r.is_zero() } -> std::convertible_to<bool>;
};

template <SmoothOracle O, SeparableRegularizer R>
class Composite {
 public:
  using Oracle = O;
  using Regularizer = R;
  using State = typename O::State;

  Composite(const O& oracle, R regularizer) : oracle_(&oracle), reg_(std::move(regularizer)) {}

  const O& oracle() const { return *oracle_; }
  const R& regularizer() const { return reg_; }

 private:
  const O* oracle_;
  R reg_;
};

template <class P>
concept CompositeProblem = requires(const P& p) {
  requires SmoothOracle<std::remove_cvref_t<decltype(p.oracle())>>;
  requires SeparableRegularizer<std::remove_cvref_t<decltype(p.regularizer())>>;
};

// Problems that can report F(x) - F* more accurately than by subtracting two
// large numbers (e.g. a certified Lasso instance).
template <class P, class S>
concept HasObjectiveGap = requires(const P& p, const S& s) {
  { p.objective_gap(s) } -> std::convertible_to<std::optional<double>>;
};

template <class P>
using OracleOf = std::remove_cvref_t<decltype(std::declval<const P&>().oracle())>;

template <class Oracle>
struct SolverState {
  typename Oracle::State inner;
  double f = 0.0;    // maintained f(x)
  double psi = 0.0;  // maintained Psi(x)
  std::uint64_t k = 0;
  SupportSet support;      // blocks with at least one nonzero coordinate
  std::size_t nnz = 0;     // nonzero coordinates
  std::vector<std::uint32_t> block_nnz;

  std::span<const double> x() const { return inner.x; }
  double objective() const { return f + psi; }
};

namespace detail {

inline std::size_t count_nonzero(std::span<const double> v) {
  std::size_t c = 0;
  for (double e : v) c += (e != 0.0);
  return c;
}

template <CompositeProblem P>
double regularizer_value(const P& p, std::span<const double> x) {
  const auto& part = p.oracle().partition();
  double s = 0.0;
  for (std::size_t i = 0; i < part.num_blocks(); ++i)
    s += p.regularizer().block_value(i, part.extract(x, i));
  return s;
}

}  // namespace detail

template <CompositeProblem P>
SolverState<OracleOf<P>> make_solver_state(const P& p, std::span<const double> x0) {
  const auto& o = p.oracle();
  const auto& part = o.partition();
  if (x0.size() != part.dimension()) throw std::invalid_argument("initial point: dimension mismatch");
  SolverState<OracleOf<P>> s;
  s.inner = o.make_state(x0);
  s.f = o.value(s.inner);
  s.psi = detail::regularizer_value(p, x0);
  s.support = SupportSet(part.num_blocks());
  s.block_nnz.assign(part.num_blocks(), 0);
  for (std::size_t i = 0; i < part.num_blocks(); ++i) {
    const auto c = detail::count_nonzero(part.extract(x0, i));
    s.block_nnz[i] = static_cast<std::uint32_t>(c);
    s.nnz += c;
    if (c) s.support.insert(i);
  }
  return s;
}

// F(x) from scratch, bypassing every cache.
template <CompositeProblem P>
double full_objective(const P& p, std::span<const double> x) {
  return p.oracle().value_at(x) + detail::regularizer_value(p, x);
}

// V_i(x, t) = <grad_i f(x), t> + (L_i/2)||t||^2_(i) + Psi_i(x^(i) + t)
template <CompositeProblem P, class S>
double block_model(const P& p, const S& s, std::size_t i, std::span<const double> t) {
  const auto& o = p.oracle();
  const auto& part = o.partition();
  const auto xi = part.extract(s.x(), i);
  if (t.size() != xi.size()) throw std::invalid_argument("block_model: block length mismatch");
  std::vector<double> g(xi.size()), moved(xi.size());
  o.block_gradient(s.inner, i, g);
  for (std::size_t j = 0; j < xi.size(); ++j) moved[j] = xi[j] + t[j];
  double lin = 0.0;
  for (std::size_t j = 0; j < xi.size(); ++j) lin += g[j] * t[j];
  return lin + 0.5 * o.lipschitz()[i] * block_norm_sq(t, o.block_norm().block(part, i)) +
         p.regularizer().block_value(i, moved);
}

struct BlockStep {
  std::vector<double> t;
  double decrease_bound = 0.0;  // V_i(x,0) - V_i(x,t) >= 0
};

// T^(i)(x) = argmin_t V_i(x, t).
template <CompositeProblem P, class S>
BlockStep block_update(const P& p, const S& s, std::size_t i) {
  const auto& o = p.oracle();
  const auto& part = o.partition();
  if (i >= part.num_blocks()) throw std::out_of_range("block_update: block index out of range");
  const double L = o.lipschitz()[i];
  if (!(L > 0.0)) throw std::invalid_argument("block_update: block has L_i = 0 and is not sampleable");
  const auto xi = part.extract(s.x(), i);
  std::vector<double> g(xi.size());
  o.block_gradient(s.inner, i, g);
  BlockStep step{std::vector<double>(xi.size()), 0.0};
  p.regularizer().block_minimize(i, xi, g, L, o.block_norm().block(part, i), step.t);
  const std::vector<double> zero(xi.size(), 0.0);
  step.decrease_bound = std::max(0.0, block_model(p, s, i, zero) - block_model(p, s, i, step.t));
  return step;
}

// x <- x + U_i t with all caches, maintained values and the support updated.
// Returns the change of F.
template <CompositeProblem P, class S>
double apply_block_step(const P& p, S& s, std::size_t i, std::span<const double> t) {
  const auto& o = p.oracle();
  const auto& part = o.partition();
  const auto xi = part.extract(std::span<const double>(s.inner.x), i);
  const double psi_old = p.regularizer().block_value(i, xi);
  const double df = o.apply_step(s.inner, i, t);
  const double psi_new = p.regularizer().block_value(i, xi);
  const std::uint32_t before = s.block_nnz[i];
  const auto after = static_cast<std::uint32_t>(detail::count_nonzero(xi));
  if (before != after) {
    s.block_nnz[i] = after;
    s.nnz = s.nnz + after - before;
    if (after == 0) s.support.erase(i);
    else if (before == 0) s.support.insert(i);
  }
  s.f += df;
  s.psi += psi_new - psi_old;
  return df + (psi_new - psi_old);
}

// T(x): every block minimizer stacked (the minimizer of H(x, .)).
template <CompositeProblem P, class S>
std::vector<double> full_update(const P& p, const S& s) {
  const auto& o = p.oracle();
  const auto& part = o.partition();
  std::vector<double> T(part.dimension());
  for (std::size_t i = 0; i < part.num_blocks(); ++i) {
    const auto xi = part.extract(s.x(), i);
    std::vector<double> g(xi.size());
    o.block_gradient(s.inner, i, g);
    p.regularizer().block_minimize(i, xi, g, o.lipschitz()[i], o.block_norm().block(part, i),
                                   part.extract(std::span<double>(T), i));
  }
  return T;
}

// H(x,T) = f(x) + <grad f(x), T> + (1/2)||T||_L^2 + Psi(x + T)
template <CompositeProblem P, class S>
double eval_H(const P& p, const S& s, std::span<const double> T) {
  const auto& o = p.oracle();
  const auto& part = o.partition();
  if (T.size() != part.dimension()) throw std::invalid_argument("eval_H: dimension mismatch");
  double h = o.value(s.inner);
  const auto x = s.x();
  for (std::size_t i = 0; i < part.num_blocks(); ++i) {
    const auto xi = part.extract(x, i);
    const auto ti = part.extract(T, i);
    std::vector<double> g(xi.size()), moved(xi.size());
    o.block_gradient(s.inner, i, g);
    for (std::size_t j = 0; j < xi.size(); ++j) {
      h += g[j] * ti[j];
      moved[j] = xi[j] + ti[j];
    }
    h += 0.5 * o.lipschitz()[i] * block_norm_sq(ti, o.block_norm().block(part, i));
    h += p.regularizer().block_value(i, moved);
  }
  return h;
}

// Full gradient assembled block by block.
template <SmoothOracle O>
std::vector<double> full_gradient(const O& o, const typename O::State& s) {
  const auto& part = o.partition();
  std::vector<double> g(part.dimension());
  for (std::size_t i = 0; i < part.num_blocks(); ++i)
    o.block_gradient(s, i, part.extract(std::span<double>(g), i));
  return g;
}

}  // namespace rcd
