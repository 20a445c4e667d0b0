#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "common/fixtures.hpp"
#include "rcd/kernels.hpp"
#include "rcd/lasso.hpp"
#include "rcd/solvers.hpp"

using namespace rcd;
using kernels::Isa;

namespace {

std::vector<Isa> available() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::scalar, Isa::avx2, Isa::avx512})
    if (kernels::supported(isa)) out.push_back(isa);
  return out;
}

struct IsaGuard {
  Isa saved = kernels::active_isa();
  ~IsaGuard() { kernels::select(saved); }
};

}  // namespace

TEST_CASE("every kernel set agrees with the scalar reference") {
  const auto& ref = kernels::table(Isa::scalar);
  CounterRng rng(1);
  for (Isa isa : available()) {
    const auto& k = kernels::table(isa);
    for (std::size_t n : {0u, 1u, 3u, 7u, 8u, 15u, 16u, 17u, 31u, 64u, 100u, 1000u}) {
      const auto a = testing::random_vector(n, rng), b = testing::random_vector(n, rng);
      const double tol = 1e-13 * static_cast<double>(n + 1);
      CHECK(k.dot(a.data(), b.data(), n) == doctest::Approx(ref.dot(a.data(), b.data(), n)).epsilon(tol));
      CHECK(k.sum_squares(a.data(), n) == doctest::Approx(ref.sum_squares(a.data(), n)).epsilon(tol));
      CHECK(k.abs_sum(a.data(), n) == doctest::Approx(ref.abs_sum(a.data(), n)).epsilon(tol));
      CHECK(k.diff_dot_sum(a.data(), b.data(), n) ==
            doctest::Approx(ref.diff_dot_sum(a.data(), b.data(), n)).epsilon(tol));

      const std::size_t dense_n = 4 * n + 5;
      auto dense = testing::random_vector(dense_n, rng);
      std::vector<std::int32_t> idx(dense_n);
      std::iota(idx.begin(), idx.end(), 0);
      for (std::size_t j = dense_n; j > 1; --j) std::swap(idx[j - 1], idx[rng.bounded(j)]);
      idx.resize(n);
      CHECK(k.gather_dot(a.data(), idx.data(), n, dense.data()) ==
            doctest::Approx(ref.gather_dot(a.data(), idx.data(), n, dense.data())).epsilon(tol));
      CHECK(k.gather_hinge(a.data(), idx.data(), n, dense.data()) ==
            doctest::Approx(ref.gather_hinge(a.data(), idx.data(), n, dense.data())).epsilon(tol));
      auto d1 = dense, d2 = dense;
      const double c1 = k.scatter_axpy(0.3, a.data(), idx.data(), n, d1.data());
      const double c2 = ref.scatter_axpy(0.3, a.data(), idx.data(), n, d2.data());
      CHECK(c1 == doctest::Approx(c2).epsilon(tol));
      for (std::size_t j = 0; j < dense_n; ++j) CHECK(d1[j] == doctest::Approx(d2[j]).epsilon(1e-15));
    }
  }
}

TEST_CASE("scatter reports the exact change of half the squared norm") {
  const auto& k = kernels::table(Isa::scalar);
  std::vector<double> dense{1.0, -2.0, 3.0, 0.5};
  const std::vector<double> v{1.0, 2.0};
  const std::vector<std::int32_t> idx{1, 3};
  auto before = 0.5 * std::inner_product(dense.begin(), dense.end(), dense.begin(), 0.0);
  const double change = k.scatter_axpy(2.0, v.data(), idx.data(), 2, dense.data());
  const auto after = 0.5 * std::inner_product(dense.begin(), dense.end(), dense.begin(), 0.0);
  CHECK(change == doctest::Approx(after - before));
  CHECK(dense == std::vector<double>{1.0, 0.0, 3.0, 4.5});
}

TEST_CASE("solves agree across kernel sets") {
  IsaGuard guard;
  const auto inst = generate_lasso({200, 150, 3000, 10, 0.5, 3});
  const LassoProblem p(inst);
  SolveConfig cfg;
  cfg.max_epochs = 300;
  std::vector<double> ref;
  for (Isa isa : available()) {
    kernels::select(isa);
    const auto r = ucdc_run(p, std::vector<double>(150, 0.0), cfg);
    CHECK(r.report.monotone_violations == 0);
    if (ref.empty()) {
      ref = r.x;
      continue;
    }
    for (std::size_t j = 0; j < ref.size(); ++j) CHECK(r.x[j] == doctest::Approx(ref[j]).epsilon(1e-8));
  }
}

TEST_CASE("ISA names") {
  CHECK(kernels::parse_isa("scalar") == Isa::scalar);
  CHECK(kernels::name(Isa::avx512) == "avx512");
  CHECK_THROWS_AS(kernels::parse_isa("neon"), std::invalid_argument);
  CHECK(kernels::supported(Isa::scalar));
}
