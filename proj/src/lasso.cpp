#include "rcd/lasso.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rcd/errors.hpp"
#include "rcd/kernels.hpp"
#include "rcd/rng.hpp"
#include "rcd/solvers.hpp"

namespace rcd {

std::vector<double> LassoInstance::dense_solution() const {
  std::vector<double> x(cols(), 0.0);
  if (certificate)
    for (std::size_t k = 0; k < certificate->support.size(); ++k)
      x[certificate->support[k]] = certificate->values[k];
  return x;
}

CertificateCheck verify_certificate(const LassoInstance& inst) {
  if (!inst.certificate) throw std::invalid_argument("verify_certificate: instance has no certificate");
  const auto x = inst.dense_solution();
  std::vector<double> r(inst.rows());
  inst.A.multiply(x, r);
  for (std::size_t j = 0; j < r.size(); ++j) r[j] -= inst.b[j];
  std::vector<double> grad(inst.cols());
  inst.A.multiply_transpose(r, grad);
  const double lam = inst.lambda;
  CertificateCheck out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    // 0 in grad_i + lam * d|x_i|
    double d;
    if (x[i] > 0.0) d = std::abs(grad[i] + lam);
    else if (x[i] < 0.0) d = std::abs(grad[i] - lam);
    else d = std::max(0.0, std::abs(grad[i]) - lam);
    out.optimality_residual = std::max(out.optimality_residual, d / std::max(lam, 1.0));
  }
  double l1 = 0.0;
  for (double v : x) l1 += std::abs(v);
  const double F = 0.5 * kernels::sum_squares(r) + lam * l1;
  const double Fs = inst.certificate->optimal_value;
  out.value_error = std::abs(F - Fs) / std::max(1.0, std::abs(Fs));
  return out;
}

// ------------------------------------------------------------------ oracle

LassoOracle::LassoOracle(const LassoInstance& inst)
    : inst_(&inst),
      part_(BlockPartition::singletons(inst.cols())),
      norm_(BlockNorm::euclidean(inst.cols())),
      lipschitz_(inst.A.column_sq_norms()) {
  if (inst.b.size() != inst.rows()) throw std::invalid_argument("LassoInstance: b has wrong length");
  if (!(inst.lambda >= 0.0) || !std::isfinite(inst.lambda))
    throw std::invalid_argument("LassoInstance: lambda must be >= 0");
}

std::vector<double> LassoOracle::residual_at(std::span<const double> x) const {
  if (x.size() != inst_->cols()) throw std::invalid_argument("LassoOracle: dimension mismatch");
  std::vector<double> g(inst_->rows());
  inst_->A.multiply(x, g);
  for (std::size_t j = 0; j < g.size(); ++j) g[j] -= inst_->b[j];
  return g;
}

LassoOracle::State LassoOracle::make_state(std::span<const double> x0) const {
  return State{std::vector<double>(x0.begin(), x0.end()), residual_at(x0), 0};
}

double LassoOracle::value(const State& s) const { return 0.5 * kernels::sum_squares(s.g); }

double LassoOracle::value_at(std::span<const double> x) const {
  return 0.5 * kernels::sum_squares(residual_at(x));
}

double LassoOracle::partial(const State& s, std::size_t i) const {
  const auto col = inst_->A.column(i);
  s.touches += col.nnz();
  return kernels::active().gather_dot(col.value.data(), col.index.data(), col.nnz(), s.g.data());
}

double LassoOracle::apply_step(State& s, std::size_t i, std::span<const double> t) const {
  const auto col = inst_->A.column(i);
  s.x[i] += t[0];
  s.touches += col.nnz();
  return kernels::active().scatter_axpy(t[0], col.value.data(), col.index.data(), col.nnz(),
                                        s.g.data());
}

double LassoOracle::refresh(State& s) const {
  auto fresh = residual_at(s.x);
  double scale = 1.0, diff = 0.0;
  for (std::size_t j = 0; j < fresh.size(); ++j) {
    scale = std::max(scale, std::abs(fresh[j]));
    diff = std::max(diff, std::abs(fresh[j] - s.g[j]));
  }
  s.g = std::move(fresh);
  return diff / scale;
}

// ----------------------------------------------------------------- problem

LassoProblem::LassoProblem(const LassoInstance& inst) : oracle_(inst), reg_(inst.lambda) {
  if (inst.certificate) {
    x_star_ = inst.dense_solution();
    r_star_ = oracle_.residual_at(x_star_);
    for (double v : inst.certificate->values) x_star_l1_ += std::abs(v);
  }
}

std::optional<double> LassoProblem::optimal_value() const {
  if (!instance().certificate) return std::nullopt;
  return instance().certificate->optimal_value;
}

std::optional<double> LassoProblem::objective_gap(const SolverState<LassoOracle>& s) const {
  if (!instance().certificate) return std::nullopt;
  // (1/2)(||g||^2 - ||r*||^2) + lambda (||x||_1 - ||x*||_1)
  const auto& k = kernels::active();
  const double smooth = 0.5 * k.diff_dot_sum(s.inner.g.data(), r_star_.data(), r_star_.size());
  double reg = 0.0;
  if (instance().lambda != 0.0) {
    const auto& x = s.inner.x;
    for (std::size_t i = 0; i < x.size(); ++i) reg += std::abs(x[i]) - std::abs(x_star_[i]);
    reg *= instance().lambda;
  }
  return smooth + reg;
}

std::optional<std::pair<std::size_t, std::size_t>> LassoProblem::support_counts(
    const SolverState<LassoOracle>& s) const {
  if (!instance().certificate) return std::nullopt;
  std::size_t correct = 0;
  for (auto i : instance().certificate->support) correct += (s.inner.x[i] != 0.0);
  return std::make_pair(correct, instance().certificate->support.size() - correct);
}

// --------------------------------------------------------------- generator

namespace {

// k distinct values from {0, ..., range-1}, sorted.
std::vector<std::uint32_t> sample_distinct(std::size_t k, std::size_t range, CounterRng& rng) {
  std::vector<std::uint32_t> out;
  if (2 * k > range) {
    // Dense case: partial Fisher-Yates.
    std::vector<std::uint32_t> all(range);
    for (std::size_t j = 0; j < range; ++j) all[j] = static_cast<std::uint32_t>(j);
    for (std::size_t j = 0; j < k; ++j) std::swap(all[j], all[j + rng.bounded(range - j)]);
    out.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k));
  } else {
    out.reserve(k);
    while (out.size() < k) {
      while (out.size() < k) out.push_back(static_cast<std::uint32_t>(rng.bounded(range)));
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

double nonzero_uniform(CounterRng& rng) {
  double v;
  do v = rng.uniform(-1.0, 1.0);
  while (v == 0.0);
  return v;
}

}  // namespace

LassoInstance generate_lasso(const GeneratorOptions& opt) {
  const std::size_t m = opt.m, n = opt.n;
  if (m == 0 || n == 0) throw std::invalid_argument("generate_lasso: m and n must be positive");
  if (opt.nnz_a < n) throw std::invalid_argument("generate_lasso: nnz_a must be >= n");
  if (opt.nnz_a > m * n) throw std::invalid_argument("generate_lasso: nnz_a exceeds m*n");
  if (opt.nnz_x > n) throw std::invalid_argument("generate_lasso: nnz_x exceeds n");
  if (!(opt.lambda >= 0.0) || !std::isfinite(opt.lambda))
    throw std::invalid_argument("generate_lasso: lambda must be >= 0");
  if (opt.profile != LipschitzProfile::natural && opt.lambda != 0.0)
    throw std::invalid_argument("generate_lasso: a Lipschitz profile requires lambda = 0");
  if (opt.profile == LipschitzProfile::log_uniform && !(opt.profile_lo <= opt.profile_hi))
    throw std::invalid_argument("generate_lasso: profile_lo must not exceed profile_hi");
  if (!(opt.low_fraction >= 0.0 && opt.low_fraction <= 1.0))
    throw std::invalid_argument("generate_lasso: low_fraction must lie in [0, 1]");

  CounterRng rng(opt.seed, 0);
  CounterRng value_rng(opt.seed, 1);

  // 1. pattern: every column gets nnz_a / n entries, the remainder goes to
  // randomly chosen columns.
  std::vector<std::size_t> counts(n, opt.nnz_a / n);
  for (auto j : sample_distinct(opt.nnz_a % n, n, rng)) ++counts[j];
  for (auto& c : counts) c = std::min(c, m);
  std::vector<std::int64_t> ptr(n + 1, 0);
  for (std::size_t j = 0; j < n; ++j) ptr[j + 1] = ptr[j] + static_cast<std::int64_t>(counts[j]);
  std::vector<std::int32_t> idx(static_cast<std::size_t>(ptr[n]));
  std::vector<double> val(idx.size());
  for (std::size_t j = 0; j < n; ++j) {
    const auto rows = sample_distinct(counts[j], m, rng);
    const auto off = static_cast<std::size_t>(ptr[j]);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      idx[off + k] = static_cast<std::int32_t>(rows[k]);
      val[off + k] = nonzero_uniform(value_rng);
    }
  }

  // 2. x*
  LassoCertificate cert;
  cert.support = sample_distinct(opt.nnz_x, n, rng);
  cert.values.resize(cert.support.size());
  for (auto& v : cert.values) v = nonzero_uniform(value_rng);

  // 3. target residual
  std::vector<double> r(m, 0.0);
  if (opt.lambda > 0.0)
    for (auto& e : r) e = rng.uniform(-1.0, 1.0);

  std::vector<char> on_support(n, 0);
  std::vector<double> sign(n, 0.0);
  for (std::size_t k = 0; k < cert.support.size(); ++k) {
    on_support[cert.support[k]] = 1;
    sign[cert.support[k]] = cert.values[k] > 0.0 ? 1.0 : -1.0;
  }

  // 4. column scaling
  auto col_dot_r = [&](std::size_t j) {
    double s = 0.0;
    for (auto k = ptr[j]; k < ptr[j + 1]; ++k)
      s += val[static_cast<std::size_t>(k)] * r[static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])];
    return s;
  };
  auto col_norm = [&](std::size_t j) {
    double s = 0.0;
    for (auto k = ptr[j]; k < ptr[j + 1]; ++k) s += val[static_cast<std::size_t>(k)] * val[static_cast<std::size_t>(k)];
    return std::sqrt(s);
  };
  auto scale_col = [&](std::size_t j, double f) {
    for (auto k = ptr[j]; k < ptr[j + 1]; ++k) val[static_cast<std::size_t>(k)] *= f;
  };

  if (opt.lambda > 0.0) {
    double r_norm = 0.0;
    for (double e : r) r_norm += e * e;
    r_norm = std::sqrt(r_norm);
    for (std::size_t j = 0; j < n; ++j) {
      double s = col_dot_r(j);
      if (on_support[j]) {
        // A near-orthogonal column would need a huge scale factor; redraw it.
        int attempts = 0;
        while (std::abs(s) < 1e-3 * col_norm(j) * r_norm / std::sqrt(static_cast<double>(m))) {
          if (++attempts > 1000) throw NumericalError("generate_lasso: cannot align a support column");
          const auto rows = sample_distinct(counts[j], m, rng);
          for (std::size_t k = 0; k < rows.size(); ++k) {
            const auto at = static_cast<std::size_t>(ptr[j]) + k;
            idx[at] = static_cast<std::int32_t>(rows[k]);
            val[at] = nonzero_uniform(value_rng);
          }
          s = col_dot_r(j);
        }
        scale_col(j, -opt.lambda * sign[j] / s);
      } else if (std::abs(s) > opt.lambda) {
        const double u = 1.0 - rng.uniform01();  // (0, 1]
        scale_col(j, opt.lambda * u / std::abs(s));
      }
    }
  } else if (opt.profile != LipschitzProfile::natural) {
    for (std::size_t j = 0; j < n; ++j) {
      double target;
      switch (opt.profile) {
        case LipschitzProfile::uniform: target = 1.0 - rng.uniform01(); break;
        case LipschitzProfile::log_uniform:
          target = std::pow(10.0, rng.uniform(opt.profile_lo, opt.profile_hi));
          break;
        default:
          target = std::pow(10.0, rng.uniform01() < opt.low_fraction ? opt.profile_lo : opt.profile_hi);
      }
      scale_col(j, std::sqrt(target) / col_norm(j));
    }
  }

  LassoInstance inst;
  inst.lambda = opt.lambda;
  inst.A = CscMatrix(m, n, std::move(ptr), std::move(idx), std::move(val));

  // 5. b = A x* - r
  const auto xs = [&] {
    std::vector<double> x(n, 0.0);
    for (std::size_t k = 0; k < cert.support.size(); ++k) x[cert.support[k]] = cert.values[k];
    return x;
  }();
  inst.b.assign(m, 0.0);
  inst.A.multiply(xs, inst.b);
  for (std::size_t j = 0; j < m; ++j) inst.b[j] -= r[j];

  // 6. F* from the residual actually realized in floating point.
  std::vector<double> realized(m);
  inst.A.multiply(xs, realized);
  for (std::size_t j = 0; j < m; ++j) realized[j] -= inst.b[j];
  double l1 = 0.0;
  for (double v : cert.values) l1 += std::abs(v);
  cert.optimal_value = 0.5 * kernels::sum_squares(realized) + opt.lambda * l1;
  inst.certificate = std::move(cert);
  return inst;
}

std::vector<double> least_squares_start(const LassoInstance& inst, double max_epochs,
                                        std::uint64_t seed) {
  const LassoOracle oracle(inst);
  SolveConfig cfg;
  cfg.seed = seed;
  cfg.max_epochs = max_epochs;
  cfg.trace_every = 0.0;
  cfg.decade_rows = false;
  const std::vector<double> x0(inst.cols(), 0.0);
  return rcds_run(oracle, ProbabilityLaw{UniformLaw{}}, x0, cfg).x;
}

}  // namespace rcd
