#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "common/fixtures.hpp"
#include "rcd/lasso.hpp"
#include "rcd/quadratic.hpp"
#include "rcd/solvers.hpp"

using namespace rcd;

namespace {

LassoInstance small_certified(std::uint64_t seed, double lambda = 1.0) {
  GeneratorOptions opt;
  opt.m = 80;
  opt.n = 60;
  opt.nnz_a = 800;
  opt.nnz_x = 8;
  opt.lambda = lambda;
  opt.seed = seed;
  return generate_lasso(opt);
}

void check_clean(const SolveResult& r) {
  CHECK(r.report.monotone_violations == 0);
  CHECK(r.report.decrease_violations == 0);
  CHECK(r.report.max_drift <= 1e-9);
}

}  // namespace

TEST_CASE("same seed and stream reproduce the run exactly") {
  const auto inst = small_certified(1);
  const LassoProblem p(inst);
  const std::vector<double> x0(inst.cols(), 0.0);
  SolveConfig cfg;
  cfg.seed = 9;
  cfg.max_epochs = 5;
  const auto a = ucdc_run(p, x0, cfg);
  const auto b = ucdc_run(p, x0, cfg);
  CHECK(a.x == b.x);
  cfg.stream = 1;
  const auto c = ucdc_run(p, x0, cfg);
  CHECK(a.x != c.x);
  check_clean(a);
}

TEST_CASE("uniform method reaches the certified optimum") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto inst = small_certified(seed);
    const LassoProblem p(inst);
    SolveConfig cfg;
    cfg.seed = seed;
    cfg.max_epochs = 2000;
    cfg.target = 1e-12;
    const auto r = ucdc_run(p, std::vector<double>(inst.cols(), 0.0), cfg);
    check_clean(r);
    CHECK(r.report.stop == StopReason::target);
    CHECK(r.report.final_residual <= 1e-12);
    CHECK(full_objective(p, r.x) - inst.certificate->optimal_value <= 1e-9);
    REQUIRE(r.trace.back().correct_nnz.has_value());
    CHECK(*r.trace.back().correct_nnz == inst.certificate->support.size());
    for (std::size_t j = 1; j < r.trace.size(); ++j) CHECK(r.trace[j].epoch > r.trace[j - 1].epoch);
    CHECK(r.trace.front().epoch == 0.0);
  }
}

TEST_CASE("other laws converge too") {
  const auto inst = small_certified(4);
  const LassoProblem p(inst);
  SolveConfig cfg;
  cfg.max_epochs = 3000;
  cfg.target = 1e-10;
  for (const ProbabilityLaw& law : {ProbabilityLaw{PowerLaw{1.0}}, ProbabilityLaw{QShrinkingLaw{0.5, 600}},
                                    ProbabilityLaw{FixedLaw{std::vector<double>(60, 1.0 / 60)}}}) {
    const auto r = rcdc_run(p, law, std::vector<double>(inst.cols(), 0.0), cfg);
    check_clean(r);
    CHECK(r.report.stop == StopReason::target);
  }
}

TEST_CASE("smooth method on least squares") {
  CounterRng rng(3);
  const std::size_t m = 30, n = 12;
  const auto a = testing::random_dense(m, n, rng);
  const auto b = testing::random_vector(m, rng);
  const auto o = QuadraticOracle::least_squares(a, m, b, BlockPartition({3, 3, 2, 4}),
                                                BlockNorm(testing::random_vector(n, rng, 0.5, 2.0)));
  SolveConfig cfg;
  cfg.max_epochs = 3000;
  const auto r = rcds_run(o, ProbabilityLaw{UniformLaw{}}, std::vector<double>(n, 0.0), cfg);
  check_clean(r);
  // Stationarity of the result.
  const auto s = o.make_state(r.x);
  for (double gj : full_gradient(o, s)) CHECK(std::abs(gj) < 1e-8);

  const Composite<QuadraticOracle, L1Regularizer> l1(o, L1Regularizer(0.5));
  CHECK_THROWS_AS(rcds_run(l1, ProbabilityLaw{UniformLaw{}}, std::vector<double>(n, 0.0), cfg),
                  std::invalid_argument);
}

TEST_CASE("composite method with multi-coordinate blocks") {
  CounterRng rng(5);
  const std::size_t m = 25, n = 10;
  const auto a = testing::random_dense(m, n, rng);
  const auto b = testing::random_vector(m, rng);
  const auto o = QuadraticOracle::least_squares(a, m, b, BlockPartition({4, 1, 5}),
                                                BlockNorm(testing::random_vector(n, rng, 0.5, 2.0)));
  const Composite<QuadraticOracle, L1Regularizer> p(o, L1Regularizer(0.7));
  SolveConfig cfg;
  cfg.max_epochs = 4000;
  const auto r = ucdc_run(p, std::vector<double>(n, 0.0), cfg);
  check_clean(r);
  // Fixed point: another full update does not move.
  auto s = make_solver_state(p, r.x);
  const auto T = full_update(p, s);
  for (double e : T) CHECK(std::abs(e) < 1e-8);
}

TEST_CASE("target needs a known optimum") {
  const auto inst = testing::dense_lasso(10, 5, 0.1, 1);
  const LassoProblem p(inst);
  SolveConfig cfg;
  cfg.target = 1e-6;
  CHECK_THROWS_AS(ucdc_run(p, std::vector<double>(5, 0.0), cfg), std::invalid_argument);
  cfg.optimal_value = 0.0;
  CHECK_NOTHROW(ucdc_run(p, std::vector<double>(5, 0.0), cfg));
}

TEST_CASE("invalid configuration is rejected") {
  const auto inst = testing::dense_lasso(10, 5, 0.1, 1);
  const LassoProblem p(inst);
  SolveConfig cfg;
  cfg.max_epochs = 0;
  CHECK_THROWS_AS(ucdc_run(p, std::vector<double>(5, 0.0), cfg), std::invalid_argument);
  cfg.max_epochs = 1;
  CHECK_THROWS_AS(ucdc_run(p, std::vector<double>(4, 0.0), cfg), std::invalid_argument);
}

TEST_CASE("columns with no entries are settled and skipped") {
  LassoInstance inst;
  inst.A = CscMatrix::from_triplets(3, 3, {{0, 0, 1.0}, {1, 2, 2.0}, {2, 2, 1.0}});
  inst.b = {1.0, 1.0, -2.0};
  inst.lambda = 0.1;
  const LassoProblem p(inst);
  SolveConfig cfg;
  cfg.max_epochs = 200;
  const auto r = ucdc_run(p, std::vector<double>{0.0, 5.0, 0.0}, cfg);
  check_clean(r);
  CHECK(r.x[1] == 0.0);
  CHECK(r.x[0] == doctest::Approx(0.9));
}

TEST_CASE("restarts keep the best run") {
  const auto inst = small_certified(2);
  const LassoProblem p(inst);
  const std::vector<double> x0(inst.cols(), 0.0);
  const double xi0 = full_objective(p, x0) - inst.certificate->optimal_value;
  SolveConfig cfg;
  cfg.seed = 3;
  const double c = 2.0 * 60 * xi0;
  const auto res = run_with_restarts(p, ProbabilityLaw{UniformLaw{}}, x0, cfg, c, xi0, 0.05 * xi0, 0.05);
  const auto plan = restart_plan(c, xi0, 0.05 * xi0, 0.05);
  CHECK(res.run_objectives.size() == plan.runs);
  CHECK(res.total_iterations == plan.total());
  for (double F : res.run_objectives) CHECK(res.objective <= F);
  CHECK(res.objective == doctest::Approx(full_objective(p, res.x)));
}

TEST_CASE("regularized run lands within eps of the optimum") {
  const auto inst = small_certified(6);
  const LassoProblem p(inst);
  const std::vector<double> x0(inst.cols(), 0.0);
  const auto x_star = inst.dense_solution();
  double dist_sq = 0.0;
  for (std::size_t i = 0; i < x0.size(); ++i) dist_sq += p.oracle().lipschitz()[i] * x_star[i] * x_star[i];
  const double F_star = inst.certificate->optimal_value;
  const double xi0 = full_objective(p, x0) - F_star;
  const double eps = 0.01 * xi0;
  SolveConfig cfg;
  const auto r = regularized_run(p.oracle(), inst.lambda, x0, eps, dist_sq, cfg, xi0, 0.1);
  check_clean(r);
  CHECK(r.report.iterations == k_regularized(inst.cols(), dist_sq, xi0, eps, 0.1));
  CHECK(full_objective(p, r.x) - F_star <= eps);
}

TEST_CASE("trace sampling honours the configuration") {
  const auto inst = small_certified(8);
  const LassoProblem p(inst);
  SolveConfig cfg;
  cfg.max_epochs = 10;
  cfg.trace_every = 2.0;
  cfg.decade_rows = false;
  const auto r = ucdc_run(p, std::vector<double>(inst.cols(), 0.0), cfg);
  REQUIRE(r.trace.size() == 6);
  for (std::size_t j = 0; j < r.trace.size(); ++j) CHECK(r.trace[j].epoch == doctest::Approx(2.0 * j));
  CHECK(r.report.iterations == 600);
  cfg.trace_every = 0.0;
  const auto quiet = ucdc_run(p, std::vector<double>(inst.cols(), 0.0), cfg);
  CHECK(quiet.trace.size() == 2);
  CHECK(quiet.x == r.x);
}
