#include <doctest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "rcd/rng.hpp"
#include "rcd/sampling.hpp"

using namespace rcd;

namespace {

// Chi-square statistic of `draws` samples against `p`.
double chi_square(const BlockSampler& s, const std::vector<double>& p, std::size_t draws, std::uint64_t k,
                  const SupportSet& support, std::uint64_t seed) {
  CounterRng rng(seed);
  std::vector<double> counts(p.size(), 0.0);
  for (std::size_t d = 0; d < draws; ++d) counts[s.sample(rng, k, support)] += 1.0;
  double chi = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) {
      CHECK(counts[i] == 0.0);
      continue;
    }
    const double e = p[i] * static_cast<double>(draws);
    chi += (counts[i] - e) * (counts[i] - e) / e;
  }
  return chi;
}

// Upper quantile of chi-square with `df` degrees of freedom at z standard
// deviations (Wilson-Hilferty).
double chi_square_critical(double df, double z = 4.75) {
  const double a = 2.0 / (9.0 * df);
  return df * std::pow(1.0 - a + z * std::sqrt(a), 3.0);
}

}  // namespace

TEST_CASE("uniform law") {
  const std::vector<double> L(20, 1.0);
  const BlockSampler s(UniformLaw{}, L);
  const auto p = s.probabilities(0, SupportSet(20));
  for (double v : p) CHECK(v == doctest::Approx(0.05));
  CHECK(chi_square(s, p, 200000, 0, SupportSet(20), 1) < chi_square_critical(19));
}

TEST_CASE("power law follows L^alpha") {
  std::vector<double> L{0.1, 1.0, 2.0, 5.0, 10.0, 0.5, 3.0};
  for (double alpha : {0.5, 1.0, 2.0}) {
    const BlockSampler s(PowerLaw{alpha}, L);
    const auto p = s.probabilities(0, SupportSet(L.size()));
    double total = 0.0;
    for (double l : L) total += std::pow(l, alpha);
    for (std::size_t i = 0; i < L.size(); ++i) CHECK(p[i] == doctest::Approx(std::pow(L[i], alpha) / total));
    CHECK(chi_square(s, p, 300000, 0, SupportSet(L.size()), 2) < chi_square_critical(6));
  }
  // alpha = 0 is uniform.
  const auto p0 = BlockSampler(PowerLaw{0.0}, L).probabilities(0, SupportSet(L.size()));
  for (double v : p0) CHECK(v == doctest::Approx(1.0 / 7.0));
}

TEST_CASE("fixed law") {
  const std::vector<double> L(4, 1.0);
  const std::vector<double> p{0.1, 0.2, 0.3, 0.4};
  const BlockSampler s(FixedLaw{p}, L);
  const auto got = s.probabilities(0, SupportSet(4));
  for (std::size_t i = 0; i < 4; ++i) CHECK(got[i] == doctest::Approx(p[i]));
  CHECK(chi_square(s, p, 200000, 0, SupportSet(4), 3) < chi_square_critical(3));
}

TEST_CASE("invalid laws are rejected") {
  const std::vector<double> L(3, 1.0);
  CHECK_THROWS_AS(BlockSampler(FixedLaw{{0.5, 0.5, 0.5}}, L), std::invalid_argument);
  CHECK_THROWS_AS(BlockSampler(FixedLaw{{0.5, 0.5, 0.0}}, L), std::invalid_argument);
  CHECK_THROWS_AS(BlockSampler(FixedLaw{{0.5, 0.5}}, L), std::invalid_argument);
  CHECK_THROWS_AS(BlockSampler(PowerLaw{-1.0}, L), std::invalid_argument);
  CHECK_THROWS_AS(BlockSampler(QShrinkingLaw{1.0, 0}, L), std::invalid_argument);
  CHECK_THROWS_AS(BlockSampler(UniformLaw{}, std::vector<double>(3, 0.0)), std::invalid_argument);
}

TEST_CASE("blocks with zero Lipschitz constant are never drawn") {
  const std::vector<double> L{1.0, 0.0, 2.0, 0.0};
  for (const ProbabilityLaw& law : {ProbabilityLaw{UniformLaw{}}, ProbabilityLaw{PowerLaw{1.0}}}) {
    const BlockSampler s(law, L);
    CHECK(s.frozen_blocks().size() == 2);
    const auto p = s.probabilities(0, SupportSet(4));
    CHECK(p[1] == 0.0);
    CHECK(p[3] == 0.0);
    CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0));
    chi_square(s, p, 10000, 0, SupportSet(4), 4);
  }
}

TEST_CASE("q-shrinking concentrates on the support after k0") {
  const std::size_t n = 100;
  const std::vector<double> L(n, 1.0);
  const BlockSampler s(QShrinkingLaw{0.9, 50}, L);
  CHECK(s.uses_support());
  SupportSet support(n);
  for (std::size_t i = 0; i < 10; ++i) support.insert(i * 7);

  // Before k0 the law is uniform.
  const auto before = s.probabilities(10, support);
  for (double v : before) CHECK(v == doctest::Approx(0.01));

  // After k0 the support holds q + (1 - q) |S| / n = 0.91 of the mass.
  const auto after = s.probabilities(50, support);
  double inside = 0.0;
  for (auto i : support.items()) inside += after[i];
  CHECK(inside == doctest::Approx(0.91));
  CHECK(chi_square(s, after, 300000, 50, support, 5) < chi_square_critical(99));

  CounterRng rng(6);
  std::size_t hits = 0;
  const std::size_t draws = 200000;
  for (std::size_t d = 0; d < draws; ++d) hits += support.contains(s.sample(rng, 60, support));
  CHECK(std::abs(static_cast<double>(hits) / draws - 0.91) < 4.0 * std::sqrt(0.91 * 0.09 / draws));

  // An empty support falls back to uniform.
  const auto empty = s.probabilities(60, SupportSet(n));
  for (double v : empty) CHECK(v == doctest::Approx(0.01));
}

TEST_CASE("streams are reproducible and distinct") {
  CounterRng a(42, 1), b(42, 1), c(42, 2);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto va = a();
    CHECK(va == b());
    differs |= va != c();
  }
  CHECK(differs);
  CounterRng r(1);
  for (int i = 0; i < 10000; ++i) {
    CHECK(r.bounded(7) < 7);
    const double u = r.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}
