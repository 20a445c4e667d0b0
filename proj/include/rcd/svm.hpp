#pragma once

// L1-regularized linear classification
//
//   F(w) = gamma * sum_j loss(-y_j w^T x_j) + scale * ||w||_1
//
// with the squared hinge (L2-SVM) or logistic loss. Margins
// r_j = -y_j w^T x_j are cached so an update of feature i touches only the
// o_i examples in which that feature occurs.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rcd/blocks.hpp"
#include "rcd/framework.hpp"
#include "rcd/regularizers.hpp"
#include "rcd/sparse.hpp"

namespace rcd {

struct SvmDataset {
  CscMatrix by_feature;  // examples x features, one column per feature
  CscMatrix by_example;  // features x examples, one column per example
  std::vector<double> labels;  // +1 / -1

  std::size_t num_examples() const { return labels.size(); }
  std::size_t num_features() const { return by_feature.cols(); }
  std::size_t observations(std::size_t feature) const { return by_feature.column_nnz(feature); }

  // Builds both layouts from per-example (feature, value) lists.
  static SvmDataset from_examples(std::size_t num_features,
                                  const std::vector<std::vector<std::pair<std::int32_t, double>>>& rows,
                                  std::vector<double> labels);
  // True when the two layouts describe the same matrix.
  bool layouts_consistent() const;
  friend bool operator==(const SvmDataset&, const SvmDataset&) = default;
};

// LIBSVM text: "label idx:val idx:val ..." with 1-based indices. Labels
// {0, 1} are mapped to {-1, +1}. Indices may appear in any order; a
// repeated index is an error. `min_features` pads the feature count (so a
// test file can match a training file). Throws IoError with a line number.
SvmDataset parse_libsvm(std::istream& in, std::string_view name, std::size_t min_features = 0);
SvmDataset load_libsvm(const std::filesystem::path& path, std::size_t min_features = 0);
void write_libsvm(const SvmDataset& data, const std::filesystem::path& path);

enum class SvmLoss { l2svm, logistic };
std::string_view loss_name(SvmLoss loss);
SvmLoss parse_loss(std::string_view text);

// Per-example loss as a function of the margin r and its derivative.
double loss_value(SvmLoss loss, double r);
double loss_derivative(SvmLoss loss, double r);

class SvmOracle {
 public:
  struct State {
    std::vector<double> x;  // weights w
    std::vector<double> r;  // -y_j w^T x_j
    mutable std::uint64_t touches = 0;
  };

  SvmOracle(const SvmDataset& data, SvmLoss loss, double gamma);

  const SvmDataset& dataset() const { return *data_; }
  SvmLoss loss() const { return loss_; }
  double gamma() const { return gamma_; }
  const BlockPartition& partition() const { return part_; }
  const BlockNorm& block_norm() const { return norm_; }
  std::span<const double> lipschitz() const { return lipschitz_; }

  State make_state(std::span<const double> w0) const;
  double value(const State& s) const;
  double value_at(std::span<const double> w) const;
  std::vector<double> margins_at(std::span<const double> w) const;
  void block_gradient(const State& s, std::size_t i, std::span<double> out) const;
  double apply_step(State& s, std::size_t i, std::span<const double> t) const;
  double refresh(State& s) const;

 private:
  const SvmDataset* data_;
  SvmLoss loss_;
  double gamma_;
  BlockPartition part_;
  BlockNorm norm_;
  std::vector<double> z_;  // y_j x_j^(i) in feature-major order
  std::vector<double> lipschitz_;
};

using SvmProblem = Composite<SvmOracle, L1Regularizer>;

// Fraction of examples with sign(w^T x_j) = y_j; w^T x_j = 0 counts as wrong.
double evaluate_accuracy(std::span<const double> w, const SvmDataset& data);

struct SvmModel {
  SvmLoss loss = SvmLoss::l2svm;
  double gamma = 1.0;
  std::vector<double> w;
};
void write_svm_model(const SvmModel& model, const std::filesystem::path& path);
SvmModel read_svm_model(const std::filesystem::path& path);

// Linearly separable data: each example has `nnz_per_example` features with
// values uniform in [-1, 1], labelled by a hidden dense weight vector;
// examples with |w^T x| below `margin` are redrawn.
SvmDataset generate_separable(std::size_t m, std::size_t n, std::size_t nnz_per_example,
                              std::uint64_t seed, double margin = 1e-3);

}  // namespace rcd
