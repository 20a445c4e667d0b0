#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace rcd {

// Indexed set over {0, ..., n-1}: O(1) insert, erase, membership and uniform
// access by position (compact list + position table, swap-remove on erase).
class SupportSet {
 public:
  SupportSet() = default;
  explicit SupportSet(std::size_t universe) : pos_(universe, kAbsent) {}

  std::size_t universe() const { return pos_.size(); }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  bool contains(std::size_t i) const { return pos_[i] != kAbsent; }
  std::size_t at(std::size_t position) const { return items_[position]; }
  std::span<const std::uint32_t> items() const { return items_; }

  void insert(std::size_t i) {
    if (pos_[i] != kAbsent) return;
    pos_[i] = static_cast<std::uint32_t>(items_.size());
    items_.push_back(static_cast<std::uint32_t>(i));
  }

  void erase(std::size_t i) {
    const std::uint32_t p = pos_[i];
    if (p == kAbsent) return;
    const std::uint32_t last = items_.back();
    items_[p] = last;
    pos_[last] = p;
    items_.pop_back();
    pos_[i] = kAbsent;
  }

  void clear() {
    for (auto i : items_) pos_[i] = kAbsent;
    items_.clear();
  }

 private:
  static constexpr std::uint32_t kAbsent = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> pos_;
  std::vector<std::uint32_t> items_;
};

}  // namespace rcd
