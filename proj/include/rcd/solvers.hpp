#pragma once

// Randomized coordinate descent loops.
//
//   rcdc_run   composite F = f + Psi, any probability law
//   ucdc_run   rcdc_run with the uniform law
//   rcds_run   smooth f (Psi == 0), step t = -(1/L_i) (grad_i f)^#
//
// plus the restarting wrapper and the proximal regularization wrapper.
//
// The loop runs in chunks between events (residual checks, drift guard,
// trace rows, budget). Only the chunks are timed.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rcd/bounds.hpp"
#include "rcd/framework.hpp"
#include "rcd/regularizers.hpp"
#include "rcd/rng.hpp"
#include "rcd/sampling.hpp"

namespace rcd {

struct SolveConfig {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  double max_epochs = 100.0;                // budget in units of n iterations
  std::optional<std::uint64_t> max_iterations;  // overrides max_epochs when set
  std::optional<double> target;             // stop when residual <= target
  std::optional<double> target_ratio;       // stop when residual <= ratio * residual_0
  double trace_every = 1.0;                 // epochs between regular trace rows; <= 0 disables
  bool decade_rows = true;                  // extra row whenever residual/residual_0 drops a decade
  std::uint32_t checks_per_epoch = 10;      // residual evaluations per epoch
  double drift_every_epochs = 1.0;
  double drift_tolerance = 1e-9;
  std::optional<double> optimal_value;      // F*, when known
  bool check_monotone = true;
};

struct TraceRow {
  double epoch = 0.0;
  double residual = 0.0;
  double f = 0.0;
  double psi = 0.0;
  std::size_t nnz = 0;
  std::optional<std::size_t> correct_nnz;
  std::optional<std::size_t> incorrect_zeros;
  double elapsed_s = 0.0;
};

enum class StopReason { budget, target };

struct SolveReport {
  std::uint64_t iterations = 0;
  std::uint64_t monotone_violations = 0;
  std::uint64_t decrease_violations = 0;  // smooth decrease bound, rcds only
  double max_drift = 0.0;
  double residual0 = 0.0;
  double final_residual = 0.0;
  double final_objective = 0.0;
  double elapsed_s = 0.0;
  StopReason stop = StopReason::budget;
  // Epoch at which the target was first met.
  std::optional<double> epochs_to_target;
};

struct SolveResult {
  std::vector<double> x;
  std::vector<TraceRow> trace;
  SolveReport report;
};

// Problems that know the optimal support report cn_k and iz_k.
template <class P, class S>
concept HasSupportCertificate = requires(const P& p, const S& s) {
  { p.support_counts(s) } -> std::convertible_to<std::optional<std::pair<std::size_t, std::size_t>>>;
};

// Oracles that can warm caches for an upcoming block. Stage 0 is issued two
// iterations ahead, stage 1 one iteration ahead.
template <class O>
concept HasPrefetch = requires(const O& o, const typename O::State& s, std::size_t i) {
  o.prefetch(s, i, 0);
};

namespace detail {

template <CompositeProblem P, class S>
double residual_of(const P& p, const S& s, const SolveConfig& cfg) {
  if constexpr (HasObjectiveGap<P, S>) {
    if (auto gap = p.objective_gap(s)) return *gap;
  }
  if (cfg.optimal_value) return s.objective() - *cfg.optimal_value;
  return s.objective();
}

template <CompositeProblem P, class S>
bool residual_is_gap(const P& p, const S& s, const SolveConfig& cfg) {
  if constexpr (HasObjectiveGap<P, S>) {
    if (p.objective_gap(s)) return true;
  }
  return cfg.optimal_value.has_value();
}

template <CompositeProblem P, class S>
TraceRow make_row(const P& p, const S& s, double epoch, double residual, double elapsed) {
  TraceRow row{epoch, residual, s.f, s.psi, s.nnz, std::nullopt, std::nullopt, elapsed};
  if constexpr (HasSupportCertificate<P, S>) {
    if (auto c = p.support_counts(s)) {
      row.correct_nnz = c->first;
      row.incorrect_zeros = c->second;
    }
  }
  return row;
}

// Blocks with L_i = 0 have a constant partial derivative: minimize Psi_i
// against it once and never sample them again.
template <CompositeProblem P, class S>
void settle_frozen_blocks(const P& p, S& s, const BlockSampler& sampler) {
  const auto& o = p.oracle();
  const auto& part = o.partition();
  std::vector<double> g, t;
  for (auto i : sampler.frozen_blocks()) {
    const auto xi = part.extract(std::span<const double>(s.inner.x), i);
    g.assign(xi.size(), 0.0);
    t.assign(xi.size(), 0.0);
    o.block_gradient(s.inner, i, g);
    p.regularizer().block_minimize(i, xi, g, 0.0, o.block_norm().block(part, i), t);
    apply_block_step(p, s, i, t);
  }
}

template <CompositeProblem P>
SolveResult run_loop(const P& p, const BlockSampler& sampler, std::span<const double> x0,
                     const SolveConfig& cfg, bool smooth_check) {
  using Clock = std::chrono::steady_clock;
  const auto& o = p.oracle();
  const auto& part = o.partition();
  const auto lip = o.lipschitz();
  const auto& bn = o.block_norm();
  const auto& reg = p.regularizer();
  const std::size_t n = part.num_blocks();
  if (!(cfg.max_epochs > 0.0) && !cfg.max_iterations)
    throw std::invalid_argument("SolveConfig: max_epochs must be positive");
  if (cfg.checks_per_epoch == 0) throw std::invalid_argument("SolveConfig: checks_per_epoch must be >= 1");
  if (cfg.target && !(*cfg.target > 0.0)) throw std::invalid_argument("SolveConfig: target must be > 0");
  if (cfg.target_ratio && !(*cfg.target_ratio > 0.0))
    throw std::invalid_argument("SolveConfig: target_ratio must be > 0");

  auto s = make_solver_state(p, x0);
  if ((cfg.target || cfg.target_ratio) && !residual_is_gap(p, s, cfg))
    throw std::invalid_argument("a residual target requires a known optimal value");
  settle_frozen_blocks(p, s, sampler);

  CounterRng rng(cfg.seed, cfg.stream);
  SolveResult out;
  auto& rep = out.report;
  const double r0 = residual_of(p, s, cfg);
  rep.residual0 = r0;
  double threshold = -std::numeric_limits<double>::infinity();
  if (cfg.target) threshold = *cfg.target;
  if (cfg.target_ratio) threshold = std::max(threshold, *cfg.target_ratio * r0);

  const auto nn = static_cast<double>(n);
  const std::uint64_t budget =
      cfg.max_iterations ? *cfg.max_iterations
                         : static_cast<std::uint64_t>(std::ceil(cfg.max_epochs * nn));
  const std::uint64_t check_step =
      std::max<std::uint64_t>(1, static_cast<std::uint64_t>(nn / cfg.checks_per_epoch));
  const std::uint64_t drift_step =
      cfg.drift_every_epochs > 0.0
          ? std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(cfg.drift_every_epochs * nn)))
          : std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t trace_step =
      cfg.trace_every > 0.0
          ? std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(cfg.trace_every * nn)))
          : std::numeric_limits<std::uint64_t>::max();

  double elapsed = 0.0;
  double residual = r0;
  int decade = 0;  // rows emitted down to residual/r0 <= 10^-decade
  out.trace.push_back(make_row(p, s, 0.0, r0, 0.0));
  if (residual <= threshold) {
    rep.stop = StopReason::target;
    rep.epochs_to_target = 0.0;
  }

  std::vector<double> g(part.max_block_size()), t(part.max_block_size());
  const bool singletons = part.all_singletons();
  const auto weights = bn.weights();
  // Laws that ignore the iterate can be drawn one step ahead, which lets the
  // oracle start fetching the next block's data early.
  const bool lookahead = !sampler.uses_support();
  std::size_t upcoming[2] = {0, 0};
  if (lookahead) {
    upcoming[0] = sampler.sample(rng, 0, s.support);
    upcoming[1] = sampler.sample(rng, 1, s.support);
  }
  std::uint64_t next_check = check_step, next_drift = drift_step, next_trace = trace_step;

  while (rep.stop != StopReason::target && s.k < budget) {
    const std::uint64_t chunk_end = std::min({next_check, next_drift, next_trace, budget});
    const auto start = Clock::now();
    for (; s.k < chunk_end; ++s.k) {
      std::size_t i;
      if (lookahead) {
        i = upcoming[0];
        upcoming[0] = upcoming[1];
        upcoming[1] = sampler.sample(rng, s.k + 2, s.support);
        if constexpr (HasPrefetch<OracleOf<P>>) {
          o.prefetch(s.inner, upcoming[1], 0);
          o.prefetch(s.inner, upcoming[0], 1);
        }
      } else {
        i = sampler.sample(rng, s.k, s.support);
      }
      if (singletons) {
        const double xi = s.inner.x[i];
        double gi, ti;
        o.block_gradient(s.inner, i, std::span<double>(&gi, 1));
        reg.block_minimize(i, std::span<const double>(&xi, 1), std::span<const double>(&gi, 1), lip[i],
                           weights.subspan(i, 1), std::span<double>(&ti, 1));
        if (ti == 0.0) continue;
        const double before = s.f + s.psi;
        const double psi_old = reg.block_value(i, std::span<const double>(&xi, 1));
        const double df = o.apply_step(s.inner, i, std::span<const double>(&ti, 1));
        const double xn = s.inner.x[i];
        const double dpsi = reg.block_value(i, std::span<const double>(&xn, 1)) - psi_old;
        if ((xi == 0.0) != (xn == 0.0)) {
          if (xn == 0.0) {
            s.support.erase(i);
            s.block_nnz[i] = 0;
            --s.nnz;
          } else {
            s.support.insert(i);
            s.block_nnz[i] = 1;
            ++s.nnz;
          }
        }
        s.f += df;
        s.psi += dpsi;
        if (cfg.check_monotone && df + dpsi > 1e-12 * (1.0 + std::abs(before))) ++rep.monotone_violations;
        if (smooth_check && -df < gi * gi / (2.0 * lip[i] * weights[i]) - 1e-10) ++rep.decrease_violations;
        continue;
      }
      const std::size_t sz = part.size(i);
      const std::span<double> gi(g.data(), sz), ti(t.data(), sz);
      const auto xi = part.extract(std::span<const double>(s.inner.x), i);
      const auto bi = bn.block(part, i);
      o.block_gradient(s.inner, i, gi);
      reg.block_minimize(i, xi, gi, lip[i], bi, ti);
      bool moved = false;
      for (double e : ti) moved |= (e != 0.0);
      if (!moved) continue;
      const double before = s.f + s.psi;
      const double f_before = s.f;
      const double dF = apply_block_step(p, s, i, std::span<const double>(ti));
      if (cfg.check_monotone && dF > 1e-12 * (1.0 + std::abs(before))) ++rep.monotone_violations;
      if (smooth_check) {
        const double bound = block_dual_norm_sq(gi, bi) / (2.0 * lip[i]);
        if (f_before - s.f < bound - 1e-10) ++rep.decrease_violations;
      }
    }
    elapsed += std::chrono::duration<double>(Clock::now() - start).count();

    if (s.k >= next_drift) {
      next_drift += drift_step;
      const double d = o.refresh(s.inner);
      const double f_fresh = o.value(s.inner);
      const double psi_fresh = regularizer_value(p, s.x());
      const double rel = std::max(d, std::abs(f_fresh + psi_fresh - s.f - s.psi) /
                                         std::max(1.0, std::abs(f_fresh + psi_fresh)));
      rep.max_drift = std::max(rep.max_drift, rel);
      if (!(rel <= cfg.drift_tolerance))
        throw NumericalError("drift guard: maintained objective differs from recomputed value by " +
                             std::to_string(rel));
      s.f = f_fresh;
      s.psi = psi_fresh;
    }
    if (!std::isfinite(s.f + s.psi)) throw NumericalError("objective became non-finite");

    const double epoch = static_cast<double>(s.k) / nn;
    bool emit = false;
    if (s.k >= next_check) {
      next_check += check_step;
      residual = residual_of(p, s, cfg);
      if (cfg.decade_rows && r0 > 0.0) {
        while (residual <= r0 * std::pow(10.0, -(decade + 1)) && decade < 400) {
          ++decade;
          emit = true;
        }
      }
      if (residual <= threshold) {
        rep.stop = StopReason::target;
        rep.epochs_to_target = epoch;
        emit = true;
      }
    }
    if (s.k >= next_trace) {
      next_trace += trace_step;
      residual = residual_of(p, s, cfg);
      emit = true;
    }
    if (emit && out.trace.back().epoch < epoch) out.trace.push_back(make_row(p, s, epoch, residual, elapsed));
  }

  residual = residual_of(p, s, cfg);
  const double epoch = static_cast<double>(s.k) / nn;
  if (out.trace.back().epoch < epoch) out.trace.push_back(make_row(p, s, epoch, residual, elapsed));
  rep.iterations = s.k;
  rep.final_residual = residual;
  rep.final_objective = s.objective();
  rep.elapsed_s = elapsed;
  out.x = std::move(s.inner.x);
  return out;
}

}  // namespace detail

template <CompositeProblem P>
SolveResult rcdc_run(const P& p, const ProbabilityLaw& law, std::span<const double> x0,
                     const SolveConfig& cfg) {
  const BlockSampler sampler(law, p.oracle().lipschitz());
  return detail::run_loop(p, sampler, x0, cfg, false);
}

template <CompositeProblem P>
SolveResult ucdc_run(const P& p, std::span<const double> x0, const SolveConfig& cfg) {
  return rcdc_run(p, ProbabilityLaw{UniformLaw{}}, x0, cfg);
}

template <SmoothOracle O>
SolveResult rcds_run(const O& oracle, const ProbabilityLaw& law, std::span<const double> x0,
                     const SolveConfig& cfg) {
  const Composite<O, ZeroRegularizer> p(oracle, ZeroRegularizer{});
  const BlockSampler sampler(law, oracle.lipschitz());
  return detail::run_loop(p, sampler, x0, cfg, true);
}

// The smooth method is only defined for Psi == 0.
template <CompositeProblem P>
SolveResult rcds_run(const P& p, const ProbabilityLaw& law, std::span<const double> x0,
                     const SolveConfig& cfg) {
  if (!p.regularizer().is_zero()) throw std::invalid_argument("rcds_run: regularizer must be zero");
  const BlockSampler sampler(law, p.oracle().lipschitz());
  return detail::run_loop(p, sampler, x0, cfg, true);
}

// ---------------------------------------------------------------- restarts

struct RestartPlan {
  std::uint64_t runs = 0;
  std::uint64_t iterations_per_run = 0;
  std::uint64_t total() const { return runs * iterations_per_run; }
};

// r = ceil(log(1/rho)) runs of k1 = ceil(e c / eps - c / xi0) iterations.
RestartPlan restart_plan(double c, double xi0, double eps, double rho);

struct RestartResult {
  std::vector<double> x;
  double objective = 0.0;
  std::vector<double> run_objectives;
  std::uint64_t total_iterations = 0;
};

// Independent runs from x0 on streams cfg.stream, cfg.stream + 1, ...;
// returns the output with the smallest F.
template <CompositeProblem P>
RestartResult run_with_restarts(const P& p, const ProbabilityLaw& law, std::span<const double> x0,
                                const SolveConfig& cfg, double c, double xi0, double eps,
                                double rho) {
  const auto plan = restart_plan(c, xi0, eps, rho);
  RestartResult best;
  best.objective = std::numeric_limits<double>::infinity();
  for (std::uint64_t r = 0; r < plan.runs; ++r) {
    SolveConfig run_cfg = cfg;
    run_cfg.stream = cfg.stream + r;
    run_cfg.max_iterations = plan.iterations_per_run;
    run_cfg.target.reset();
    run_cfg.target_ratio.reset();
    auto res = rcdc_run(p, law, x0, run_cfg);
    const double F = full_objective(p, res.x);
    best.run_objectives.push_back(F);
    best.total_iterations += res.report.iterations;
    if (F < best.objective) {
      best.objective = F;
      best.x = std::move(res.x);
    }
  }
  return best;
}

// ------------------------------------------------------- regularization

// F_mu(x) = F(x) + (mu/2)||x - x0||_L^2 with mu = eps / dist_sq, where
// dist_sq = ||x0 - x*||_L^2. Requires 0 < eps <= 2 dist_sq.
double regularization_mu(double eps, double dist_sq);

template <SmoothOracle O>
Composite<O, L1Regularizer> regularized_problem(const O& oracle, double lambda, double mu,
                                                std::span<const double> x0) {
  return Composite<O, L1Regularizer>(
      oracle, L1Regularizer::with_proximal_term(lambda, mu, std::vector<double>(x0.begin(), x0.end()),
                                                oracle.lipschitz(), oracle.partition(),
                                                oracle.block_norm()));
}

// UCDC on F_mu. Without cfg.max_iterations the budget is the regularized
// iteration bound for (xi0, rho).

template <SmoothOracle O>
SolveResult regularized_run(const O& oracle, double lambda, std::span<const double> x0, double eps,
                            double dist_sq, SolveConfig cfg, std::optional<double> xi0 = std::nullopt,
                            double rho = 0.1) {
  const double mu = regularization_mu(eps, dist_sq);
  const auto p = regularized_problem(oracle, lambda, mu, x0);
  if (!cfg.max_iterations && xi0)
    cfg.max_iterations = k_regularized(oracle.partition().num_blocks(), dist_sq, *xi0, eps, rho);
  cfg.optimal_value.reset();
  cfg.target.reset();
  cfg.target_ratio.reset();
  return ucdc_run(p, x0, cfg);
}

}  // namespace rcd
