#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <vector>

#include "common/fixtures.hpp"
#include "rcd/errors.hpp"
#include "rcd/lasso.hpp"
#include "rcd/regularizers.hpp"
#include "rcd/solvers.hpp"

using namespace rcd;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "rcd_unit";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("soft-threshold step examples") {
  CHECK(l1_block_step(0.0, 5.0, 1.0, 2.0) == -2.0);
  CHECK(l1_block_step(3.0, -4.0, 1.0, 1.0) == 3.0);
  // Inside the dead zone the coordinate is sent to zero.
  CHECK(l1_block_step(0.4, 0.2, 1.0, 1.0) == -0.4);
  CHECK(l1_block_step(0.0, 0.5, 1.0, 1.0) == 0.0);
}

TEST_CASE("soft-threshold step minimizes the scalar model") {
  CounterRng rng(1);
  for (int trial = 0; trial < 2000; ++trial) {
    const double x = rng.uniform(-3.0, 3.0), a = rng.uniform(-3.0, 3.0);
    const double lam = rng.uniform(0.0, 2.0), L = rng.uniform(0.1, 5.0);
    const auto model = [&](double t) { return a * t + 0.5 * L * t * t + lam * std::abs(x + t); };
    const double t = l1_block_step(x, a, lam, L);
    for (double d : {-1e-3, -1e-6, 1e-6, 1e-3}) CHECK(model(t) <= model(t + d) + 1e-15);
  }
}

TEST_CASE("generated instances carry a valid certificate") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    GeneratorOptions opt{200, 100, 1500, 12, 0.7, seed};
    const auto inst = generate_lasso(opt);
    CHECK(inst.A.nnz() == 1500);
    for (std::size_t j = 0; j < inst.cols(); ++j) CHECK(inst.A.column_nnz(j) >= 1);
    REQUIRE(inst.certificate.has_value());
    CHECK(inst.certificate->support.size() == 12);
    const auto check = verify_certificate(inst);
    CHECK(check.passed());
    CHECK(check.optimality_residual <= 1e-12);

    // Independent check of the optimality conditions on the dense form.
    const auto x = inst.dense_solution();
    std::vector<double> r(inst.rows());
    inst.A.multiply(x, r);
    double half_sq = 0.0, l1 = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      r[i] -= inst.b[i];
      half_sq += 0.5 * r[i] * r[i];
    }
    std::vector<double> grad(inst.cols());
    inst.A.multiply_transpose(r, grad);
    for (std::size_t j = 0; j < x.size(); ++j) {
      l1 += std::abs(x[j]);
      if (x[j] != 0.0) CHECK(grad[j] == doctest::Approx(-opt.lambda * (x[j] > 0 ? 1.0 : -1.0)).epsilon(1e-9));
      else CHECK(std::abs(grad[j]) <= opt.lambda * (1.0 + 1e-12));
    }
    CHECK(inst.certificate->optimal_value == doctest::Approx(half_sq + opt.lambda * l1).epsilon(1e-12));
  }
}

TEST_CASE("generator determinism and parameter checks") {
  const GeneratorOptions opt{50, 40, 300, 5, 1.0, 3};
  CHECK(generate_lasso(opt) == generate_lasso(opt));
  auto other = opt;
  other.seed = 4;
  CHECK_FALSE(generate_lasso(opt) == generate_lasso(other));

  auto bad = opt;
  bad.nnz_a = 10;
  CHECK_THROWS_AS(generate_lasso(bad), std::invalid_argument);
  bad = opt;
  bad.nnz_x = 41;
  CHECK_THROWS_AS(generate_lasso(bad), std::invalid_argument);
  bad = opt;
  bad.profile = LipschitzProfile::uniform;
  CHECK_THROWS_AS(generate_lasso(bad), std::invalid_argument);
}

TEST_CASE("Lipschitz profiles shape the column norms") {
  GeneratorOptions opt{100, 80, 800, 10, 0.0, 5};
  opt.profile = LipschitzProfile::uniform;
  auto inst = generate_lasso(opt);
  auto L = inst.A.column_sq_norms();
  for (double l : L) {
    CHECK(l > 0.0);
    CHECK(l < 1.0);
  }
  CHECK(verify_certificate(inst).passed());
  CHECK(inst.certificate->optimal_value == 0.0);

  opt.profile = LipschitzProfile::two_level;
  opt.profile_lo = -2;
  opt.profile_hi = 1;
  inst = generate_lasso(opt);
  L = inst.A.column_sq_norms();
  std::size_t low = 0;
  for (double l : L) {
    const bool is_low = std::abs(l - 0.01) < 1e-12;
    CHECK((is_low || std::abs(l - 10.0) < 1e-10));
    low += is_low;
  }
  CHECK(low > 20);
  CHECK(low < 60);
  CHECK(verify_certificate(inst).passed());
}

TEST_CASE("binary and text files round-trip exactly") {
  const auto inst = generate_lasso({30, 20, 120, 4, 0.3, 1});
  const auto bin = scratch("rt.bin"), txt = scratch("rt.txt");
  write_lasso_binary(inst, bin);
  write_lasso_text(inst, txt);
  CHECK(read_lasso(bin) == inst);
  CHECK(read_lasso(txt) == inst);

  auto plain = testing::dense_lasso(5, 3, 0.5, 2);
  write_lasso_binary(plain, bin);
  CHECK(read_lasso(bin) == plain);
  write_lasso_text(plain, txt);
  CHECK(read_lasso(txt) == plain);
}

TEST_CASE("malformed files raise IoError") {
  CHECK_THROWS_AS(read_lasso(scratch("missing.bin")), IoError);
  {
    std::ofstream out(scratch("junk.txt"));
    out << "not an instance\n";
  }
  CHECK_THROWS_AS(read_lasso(scratch("junk.txt")), IoError);
  const auto inst = generate_lasso({30, 20, 120, 4, 0.3, 1});
  write_lasso_binary(inst, scratch("trunc.bin"));
  fs::resize_file(scratch("trunc.bin"), fs::file_size(scratch("trunc.bin")) / 2);
  CHECK_THROWS_AS(read_lasso(scratch("trunc.bin")), IoError);
  {
    std::ofstream out(scratch("bad.txt"));
    out << "rcd-lasso-text 1\n2 2 1 0.5 0\nA\n0 0 x\n";
  }
  try {
    read_lasso(scratch("bad.txt"));
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find(":4") != std::string::npos);
  }
}

TEST_CASE("an iteration touches only the column's residual entries") {
  const auto inst = generate_lasso({500, 200, 2000, 10, 1.0, 2});
  const LassoOracle o(inst);
  auto s = o.make_state(std::vector<double>(200, 0.0));
  for (std::size_t i = 0; i < 200; i += 17) {
    const auto before = s.touches;
    const double g = o.partial(s, i);
    const double t = -g / o.lipschitz()[i];
    o.apply_step(s, i, std::span<const double>(&t, 1));
    CHECK(s.touches - before == 2 * inst.A.column_nnz(i));
  }
  // The maintained residual matches a recomputation.
  CHECK(o.refresh(s) <= 1e-14);
}

TEST_CASE("step changes report the exact objective change") {
  const auto inst = testing::dense_lasso(20, 10, 0.0, 3);
  const LassoOracle o(inst);
  CounterRng rng(4);
  auto s = o.make_state(testing::random_vector(10, rng));
  for (int k = 0; k < 50; ++k) {
    const std::size_t i = rng.bounded(10);
    const double t = rng.uniform(-1.0, 1.0);
    const double before = o.value_at(s.x);
    const double df = o.apply_step(s, i, std::span<const double>(&t, 1));
    CHECK(df == doctest::Approx(o.value_at(s.x) - before).epsilon(1e-12));
  }
}

TEST_CASE("objective gap and support counts") {
  const auto inst = generate_lasso({60, 40, 400, 6, 1.0, 7});
  const LassoProblem p(inst);
  const auto x_star = inst.dense_solution();
  const auto at_opt = make_solver_state(p, x_star);
  CHECK(std::abs(*p.objective_gap(at_opt)) <= 1e-13);
  CHECK(p.support_counts(at_opt)->first == 6);
  CHECK(p.support_counts(at_opt)->second == 0);
  const auto at_zero = make_solver_state(p, std::vector<double>(40, 0.0));
  CHECK(*p.objective_gap(at_zero) ==
        doctest::Approx(full_objective(p, std::vector<double>(40, 0.0)) - inst.certificate->optimal_value));
  CHECK(p.support_counts(at_zero)->second == 6);
}

TEST_CASE("least-squares start reduces the smooth part") {
  const auto inst = generate_lasso({120, 50, 600, 5, 1.0, 9});
  const auto x = least_squares_start(inst, 200, 1);
  const LassoOracle o(inst);
  CHECK(o.value_at(x) < o.value_at(std::vector<double>(50, 0.0)));
  const auto s = o.make_state(x);
  for (std::size_t j = 0; j < 50; ++j) CHECK(std::abs(o.partial(s, j)) < 1e-6);
}
