#pragma once

// Block structure of the coordinate space R^N = R^{N_1} x ... x R^{N_n}.
//
// Blocks are contiguous ranges in identity order; any other column
// permutation is applied to the data at load time. Block norms are the
// diagonal quadratic norms ||t||_(i) = (sum_j b_j t_j^2)^{1/2} with dual
// norms using 1/b_j.

#include <cstddef>
#include <span>
#include <vector>

namespace rcd {

class BlockPartition {
 public:
  BlockPartition() = default;
  explicit BlockPartition(std::vector<std::size_t> sizes);

  // n blocks of one coordinate each.
  static BlockPartition singletons(std::size_t n);
  // Blocks of `block_size` coordinates; the last block takes the remainder.
  static BlockPartition uniform(std::size_t dimension, std::size_t block_size);

  std::size_t num_blocks() const { return sizes_.size(); }
  std::size_t dimension() const { return dimension_; }
  std::size_t size(std::size_t i) const { return sizes_[i]; }
  std::size_t offset(std::size_t i) const { return offsets_[i]; }
  std::size_t max_block_size() const { return max_size_; }
  bool all_singletons() const { return max_size_ <= 1; }
  std::span<const std::size_t> sizes() const { return sizes_; }
  std::span<const std::size_t> offsets() const { return offsets_; }

  // Block that owns coordinate j.
  std::size_t block_of(std::size_t j) const;

  // x^(i); throws std::out_of_range for a bad index and std::invalid_argument
  // when x has the wrong length.
  std::span<const double> extract(std::span<const double> x, std::size_t i) const;
  std::span<double> extract(std::span<double> x, std::size_t i) const;

  // x += U_i t
  void embed_add(std::span<const double> t, std::size_t i, std::span<double> x) const;

  friend bool operator==(const BlockPartition&, const BlockPartition&) = default;

 private:
  void check(std::size_t x_len, std::size_t i) const;

  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> offsets_;
  std::size_t dimension_ = 0;
  std::size_t max_size_ = 0;
};

// Diagonal weights b (length N, all > 0) defining the per-block norms.
class BlockNorm {
 public:
  BlockNorm() = default;
  explicit BlockNorm(std::vector<double> weights);
  static BlockNorm euclidean(std::size_t dimension);

  std::size_t dimension() const { return weights_.size(); }
  bool is_euclidean() const { return euclidean_; }
  std::span<const double> weights() const { return weights_; }
  std::span<const double> block(const BlockPartition& part, std::size_t i) const {
    return std::span<const double>(weights_).subspan(part.offset(i), part.size(i));
  }

 private:
  std::vector<double> weights_;
  bool euclidean_ = true;
};

// Global weights w_1..w_n (one per block), e.g. w = L or w = L/p.
class GlobalWeights {
 public:
  GlobalWeights() = default;
  explicit GlobalWeights(std::vector<double> w);
  std::size_t size() const { return w_.size(); }
  double operator[](std::size_t i) const { return w_[i]; }
  std::span<const double> values() const { return w_; }

 private:
  std::vector<double> w_;
};

// ||t||_(i)^2 and (||s||*_(i))^2 for a single block with weights b.
double block_norm_sq(std::span<const double> t, std::span<const double> b);
double block_dual_norm_sq(std::span<const double> s, std::span<const double> b);

// ||x||_W = [sum_i w_i ||x^(i)||_(i)^2]^{1/2}
double norm_w(std::span<const double> x, const GlobalWeights& w, const BlockNorm& bn,
              const BlockPartition& part);
// ||y||*_W = [sum_i w_i^{-1} (||y^(i)||*_(i))^2]^{1/2}
double dual_norm_w(std::span<const double> y, const GlobalWeights& w, const BlockNorm& bn,
                   const BlockPartition& part);

// s^# = argmin_t -<s,t> + (1/2)||t||^2 under weights b, i.e. s_j / b_j.
void sharp(std::span<const double> s, std::span<const double> b, std::span<double> out);
std::vector<double> sharp(std::span<const double> s, std::span<const double> b);

}  // namespace rcd
