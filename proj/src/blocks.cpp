#include "rcd/blocks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rcd {
namespace {

void require_positive(std::span<const double> v, const char* what) {
  for (double x : v)
    if (!(x > 0.0) || !std::isfinite(x))
      throw std::invalid_argument(std::string(what) + ": weights must be finite and > 0");
}

}  // namespace

BlockPartition::BlockPartition(std::vector<std::size_t> sizes) : sizes_(std::move(sizes)) {
  offsets_.resize(sizes_.size());
  std::size_t off = 0;
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    if (sizes_[i] == 0) throw std::invalid_argument("BlockPartition: block sizes must be positive");
    offsets_[i] = off;
    off += sizes_[i];
    max_size_ = std::max(max_size_, sizes_[i]);
  }
  dimension_ = off;
}

BlockPartition BlockPartition::singletons(std::size_t n) {
  return BlockPartition(std::vector<std::size_t>(n, 1));
}

BlockPartition BlockPartition::uniform(std::size_t dimension, std::size_t block_size) {
  if (block_size == 0) throw std::invalid_argument("BlockPartition: block size must be positive");
  std::vector<std::size_t> sizes;
  for (std::size_t off = 0; off < dimension; off += block_size)
    sizes.push_back(std::min(block_size, dimension - off));
  return BlockPartition(std::move(sizes));
}

std::size_t BlockPartition::block_of(std::size_t j) const {
  if (j >= dimension_) throw std::out_of_range("BlockPartition: coordinate out of range");
  if (all_singletons()) return j;
  const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), j);
  return static_cast<std::size_t>(it - offsets_.begin()) - 1;
}

void BlockPartition::check(std::size_t x_len, std::size_t i) const {
  if (i >= sizes_.size()) throw std::out_of_range("BlockPartition: block index out of range");
  if (x_len != dimension_) throw std::invalid_argument("BlockPartition: dimension mismatch");
}

std::span<const double> BlockPartition::extract(std::span<const double> x, std::size_t i) const {
  check(x.size(), i);
  return x.subspan(offsets_[i], sizes_[i]);
}

std::span<double> BlockPartition::extract(std::span<double> x, std::size_t i) const {
  check(x.size(), i);
  return x.subspan(offsets_[i], sizes_[i]);
}

void BlockPartition::embed_add(std::span<const double> t, std::size_t i, std::span<double> x) const {
  check(x.size(), i);
  if (t.size() != sizes_[i]) throw std::invalid_argument("BlockPartition: block length mismatch");
  double* dst = x.data() + offsets_[i];
  for (std::size_t j = 0; j < t.size(); ++j) dst[j] += t[j];
}

BlockNorm::BlockNorm(std::vector<double> weights) : weights_(std::move(weights)) {
  require_positive(weights_, "BlockNorm");
  euclidean_ = std::all_of(weights_.begin(), weights_.end(), [](double b) { return b == 1.0; });
}

BlockNorm BlockNorm::euclidean(std::size_t dimension) {
  return BlockNorm(std::vector<double>(dimension, 1.0));
}

GlobalWeights::GlobalWeights(std::vector<double> w) : w_(std::move(w)) {
  require_positive(w_, "GlobalWeights");
}

double block_norm_sq(std::span<const double> t, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < t.size(); ++j) s += b[j] * t[j] * t[j];
  return s;
}

double block_dual_norm_sq(std::span<const double> s, std::span<const double> b) {
  double r = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) r += s[j] * s[j] / b[j];
  return r;
}

namespace {

void check_dims(std::size_t x_len, const GlobalWeights& w, const BlockNorm& bn,
                const BlockPartition& part) {
  if (x_len != part.dimension() || bn.dimension() != part.dimension() ||
      w.size() != part.num_blocks())
    throw std::invalid_argument("norm_w: dimension mismatch");
}

}  // namespace

double norm_w(std::span<const double> x, const GlobalWeights& w, const BlockNorm& bn,
              const BlockPartition& part) {
  check_dims(x.size(), w, bn, part);
  double s = 0.0;
  for (std::size_t i = 0; i < part.num_blocks(); ++i)
    s += w[i] * block_norm_sq(part.extract(x, i), bn.block(part, i));
  return std::sqrt(s);
}

double dual_norm_w(std::span<const double> y, const GlobalWeights& w, const BlockNorm& bn,
                   const BlockPartition& part) {
  check_dims(y.size(), w, bn, part);
  double s = 0.0;
  for (std::size_t i = 0; i < part.num_blocks(); ++i)
    s += block_dual_norm_sq(part.extract(y, i), bn.block(part, i)) / w[i];
  return std::sqrt(s);
}

void sharp(std::span<const double> s, std::span<const double> b, std::span<double> out) {
  if (s.size() != b.size() || out.size() != s.size())
    throw std::invalid_argument("sharp: dimension mismatch");
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (!(b[j] > 0.0)) throw std::invalid_argument("sharp: weights must be > 0");
    out[j] = s[j] / b[j];
  }
}

std::vector<double> sharp(std::span<const double> s, std::span<const double> b) {
  std::vector<double> out(s.size());
  sharp(s, b, out);
  return out;
}

}  // namespace rcd
