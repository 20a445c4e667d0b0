#pragma once

// How the block i_k is drawn at each iteration.
//
//   Uniform               p_i = 1/n
//   Fixed{p}              user vector, p_i > 0, sum p_i = 1
//   PowerLaw{alpha}       p_i = L_i^alpha / sum_j L_j^alpha
//   QShrinking{q, k0}     uniform for k < k0; afterwards uniform over all
//                         blocks with probability 1-q and uniform over the
//                         current support with probability q
//
// Blocks with L_i = 0 are never sampled; their mass is renormalized over the
// remaining blocks.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rcd/rng.hpp"
#include "rcd/support.hpp"

namespace rcd {

struct UniformLaw {};
struct FixedLaw {
  std::vector<double> p;
};
struct PowerLaw {
  double alpha = 0.0;
};
struct QShrinkingLaw {
  double q = 0.0;
  std::uint64_t k0 = 0;
};

using ProbabilityLaw = std::variant<UniformLaw, FixedLaw, PowerLaw, QShrinkingLaw>;

std::string describe(const ProbabilityLaw& law);

class BlockSampler {
 public:
  // Throws std::invalid_argument for an invalid law (nonpositive or
  // unnormalized p, alpha < 0, q outside [0,1)) or when no block has L_i > 0.
  BlockSampler(const ProbabilityLaw& law, std::span<const double> lipschitz);

  std::size_t sample(CounterRng& rng, std::uint64_t k, const SupportSet& support) const {
    switch (kind_) {
      case Kind::uniform:
        return active_[rng.bounded(active_.size())];
      case Kind::cumulative:
        return sample_cumulative(rng);
      case Kind::shrinking:
        if (k >= k0_ && !support.empty() && rng.uniform01() < q_)
          return support.at(rng.bounded(support.size()));
        return active_[rng.bounded(active_.size())];
    }
    return 0;
  }

  // The distribution the next draw follows, as a dense length-n vector.
  std::vector<double> probabilities(std::uint64_t k, const SupportSet& support) const;

  std::span<const std::uint32_t> active_blocks() const { return active_; }
  std::span<const std::uint32_t> frozen_blocks() const { return frozen_; }
  bool uses_support() const { return kind_ == Kind::shrinking; }

 private:
  enum class Kind { uniform, cumulative, shrinking };
  std::size_t sample_cumulative(CounterRng& rng) const;

  Kind kind_ = Kind::uniform;
  std::size_t n_ = 0;
  std::vector<std::uint32_t> active_;
  std::vector<std::uint32_t> frozen_;
  std::vector<double> cumulative_;  // over active_, last entry = total
  double q_ = 0.0;
  std::uint64_t k0_ = 0;
};

}  // namespace rcd
