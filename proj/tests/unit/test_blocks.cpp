#include <doctest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "common/fixtures.hpp"
#include "rcd/blocks.hpp"
#include "rcd/rng.hpp"

using namespace rcd;

TEST_CASE("partition offsets and block lookup") {
  const BlockPartition p({2, 3, 1});
  CHECK(p.num_blocks() == 3);
  CHECK(p.dimension() == 6);
  CHECK(p.offset(2) == 5);
  CHECK(p.max_block_size() == 3);
  CHECK_FALSE(p.all_singletons());
  CHECK(p.block_of(0) == 0);
  CHECK(p.block_of(4) == 1);
  CHECK(p.block_of(5) == 2);

  const auto u = BlockPartition::uniform(10, 4);
  CHECK(u.num_blocks() == 3);
  CHECK(u.size(2) == 2);
  CHECK(BlockPartition::singletons(5).all_singletons());
}

TEST_CASE("partition rejects bad input") {
  CHECK_THROWS_AS(BlockPartition({2, 0}), std::invalid_argument);
  const BlockPartition p({2, 2});
  std::vector<double> x(4), wrong(3);
  CHECK_THROWS_AS(p.extract(std::span<const double>(x), 2), std::out_of_range);
  CHECK_THROWS_AS(p.extract(std::span<const double>(wrong), 0), std::invalid_argument);
}

TEST_CASE("extract then embed reconstructs x") {
  CounterRng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::size_t> sizes(1 + rng.bounded(6));
    for (auto& s : sizes) s = 1 + rng.bounded(5);
    const BlockPartition p(sizes);
    const auto x = testing::random_vector(p.dimension(), rng);
    std::vector<double> y(p.dimension(), 0.0);
    for (std::size_t i = 0; i < p.num_blocks(); ++i) p.embed_add(p.extract(std::span<const double>(x), i), i, y);
    CHECK(y == x);
  }
}

TEST_CASE("sharp on the Euclidean norm is the identity") {
  const std::vector<double> s{3.0, 4.0}, b{1.0, 1.0};
  const auto t = sharp(s, b);
  CHECK(t == s);
  CHECK(std::sqrt(block_norm_sq(t, b)) == doctest::Approx(5.0));
}

TEST_CASE("sharp identities on random diagonal norms") {
  CounterRng rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t d = 1 + rng.bounded(64);
    const auto s = testing::random_vector(d, rng, -10.0, 10.0);
    const auto b = testing::random_vector(d, rng, 0.01, 10.0);
    const auto t = sharp(s, b);
    const double dual_sq = block_dual_norm_sq(s, b);

    double model = 0.5 * block_norm_sq(t, b);
    for (std::size_t j = 0; j < d; ++j) model -= s[j] * t[j];
    CHECK(std::abs(model + 0.5 * dual_sq) <= 1e-12 * (1.0 + dual_sq));

    const double primal = std::sqrt(block_norm_sq(t, b));
    const double dual = std::sqrt(dual_sq);
    CHECK(std::abs(primal - dual) <= 1e-12 * std::max(1.0, dual));

    const double alpha = rng.uniform(-5.0, 5.0);
    std::vector<double> scaled(d);
    for (std::size_t j = 0; j < d; ++j) scaled[j] = alpha * s[j];
    const auto ts = sharp(scaled, b);
    for (std::size_t j = 0; j < d; ++j)
      CHECK(std::abs(ts[j] - alpha * t[j]) <= 1e-12 * std::max(1.0, std::abs(alpha * t[j])));
  }
}

TEST_CASE("sharp minimizes the model against random perturbations") {
  CounterRng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 1 + rng.bounded(8);
    const auto s = testing::random_vector(d, rng);
    const auto b = testing::random_vector(d, rng, 0.1, 3.0);
    const auto model = [&](const std::vector<double>& t) {
      double v = 0.5 * block_norm_sq(t, b);
      for (std::size_t j = 0; j < d; ++j) v -= s[j] * t[j];
      return v;
    };
    const auto t = sharp(s, b);
    auto probe = t;
    for (auto& e : probe) e += rng.uniform(-0.1, 0.1);
    CHECK(model(t) <= model(probe) + 1e-15);
  }
}

TEST_CASE("weighted norms are dual to each other") {
  CounterRng rng(5);
  const BlockPartition p({1, 3, 2});
  const BlockNorm bn(testing::random_vector(6, rng, 0.5, 2.0));
  const GlobalWeights w(testing::random_vector(3, rng, 0.5, 4.0));
  for (int trial = 0; trial < 100; ++trial) {
    const auto x = testing::random_vector(6, rng);
    const auto y = testing::random_vector(6, rng);
    // Cauchy-Schwarz: <x, y> <= ||x||_W ||y||*_W
    const double ip = std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
    CHECK(ip <= norm_w(x, w, bn, p) * dual_norm_w(y, w, bn, p) + 1e-12);
  }
  // The bound is attained by y = W B x.
  const auto x = testing::random_vector(6, rng);
  std::vector<double> y(6);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = p.offset(i); j < p.offset(i) + p.size(i); ++j) y[j] = w[i] * bn.weights()[j] * x[j];
  const double ip = std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
  CHECK(ip == doctest::Approx(norm_w(x, w, bn, p) * dual_norm_w(y, w, bn, p)).epsilon(1e-12));
}

TEST_CASE("norm weights must be positive") {
  CHECK_THROWS_AS(BlockNorm(std::vector<double>{1.0, 0.0}), std::invalid_argument);
  CHECK(BlockNorm::euclidean(3).is_euclidean());
  CHECK_FALSE(BlockNorm(std::vector<double>{1.0, 2.0}).is_euclidean());
}
