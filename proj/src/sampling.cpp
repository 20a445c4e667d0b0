#include "rcd/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rcd {

std::string describe(const ProbabilityLaw& law) {
  std::ostringstream os;
  std::visit(
      [&](const auto& l) {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, UniformLaw>) os << "uniform";
        else if constexpr (std::is_same_v<T, FixedLaw>) os << "fixed(n=" << l.p.size() << ")";
        else if constexpr (std::is_same_v<T, PowerLaw>) os << "power(alpha=" << l.alpha << ")";
        else os << "q-shrinking(q=" << l.q << ", k0=" << l.k0 << ")";
      },
      law);
  return os.str();
}

BlockSampler::BlockSampler(const ProbabilityLaw& law, std::span<const double> lipschitz)
    : n_(lipschitz.size()) {
  for (std::size_t i = 0; i < n_; ++i) {
    if (lipschitz[i] > 0.0) active_.push_back(static_cast<std::uint32_t>(i));
    else frozen_.push_back(static_cast<std::uint32_t>(i));
  }
  if (active_.empty()) throw std::invalid_argument("BlockSampler: no block has L_i > 0");

  std::visit(
      [&](const auto& l) {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, UniformLaw>) {
          kind_ = Kind::uniform;
        } else if constexpr (std::is_same_v<T, FixedLaw>) {
          if (l.p.size() != n_) throw std::invalid_argument("FixedLaw: length must equal block count");
          double total = 0.0;
          for (double p : l.p) {
            if (!(p > 0.0) || !std::isfinite(p)) throw std::invalid_argument("FixedLaw: probabilities must be > 0");
            total += p;
          }
          if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("FixedLaw: probabilities must sum to 1");
          kind_ = Kind::cumulative;
          double acc = 0.0;
          for (auto i : active_) cumulative_.push_back(acc += l.p[i]);
        } else if constexpr (std::is_same_v<T, PowerLaw>) {
          if (!(l.alpha >= 0.0) || !std::isfinite(l.alpha)) throw std::invalid_argument("PowerLaw: alpha must be >= 0");
          if (l.alpha == 0.0) {
            kind_ = Kind::uniform;
          } else {
            kind_ = Kind::cumulative;
            // Scale by max L before the power to stay in range for large alpha.
            double lmax = 0.0;
            for (auto i : active_) lmax = std::max(lmax, lipschitz[i]);
            double acc = 0.0;
            for (auto i : active_) cumulative_.push_back(acc += std::pow(lipschitz[i] / lmax, l.alpha));
          }
        } else {
          if (!(l.q >= 0.0 && l.q < 1.0)) throw std::invalid_argument("QShrinkingLaw: q must be in [0, 1)");
          kind_ = l.q == 0.0 ? Kind::uniform : Kind::shrinking;
          q_ = l.q;
          k0_ = l.k0;
        }
      },
      law);
}

std::size_t BlockSampler::sample_cumulative(CounterRng& rng) const {
  const double u = rng.uniform01() * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;
  return active_[static_cast<std::size_t>(it - cumulative_.begin())];
}

std::vector<double> BlockSampler::probabilities(std::uint64_t k, const SupportSet& support) const {
  std::vector<double> p(n_, 0.0);
  const double na = static_cast<double>(active_.size());
  switch (kind_) {
    case Kind::uniform:
      for (auto i : active_) p[i] = 1.0 / na;
      break;
    case Kind::cumulative: {
      double prev = 0.0;
      for (std::size_t a = 0; a < active_.size(); ++a) {
        p[active_[a]] = (cumulative_[a] - prev) / cumulative_.back();
        prev = cumulative_[a];
      }
      break;
    }
    case Kind::shrinking: {
      const bool shrink = k >= k0_ && !support.empty();
      const double base = shrink ? (1.0 - q_) / na : 1.0 / na;
      for (auto i : active_) p[i] = base;
      if (shrink)
        for (auto i : support.items()) p[i] += q_ / static_cast<double>(support.size());
      break;
    }
  }
  return p;
}

}  // namespace rcd
