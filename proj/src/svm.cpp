#include "rcd/svm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "rcd/errors.hpp"
#include "rcd/kernels.hpp"
#include "rcd/rng.hpp"

namespace rcd {

SvmDataset SvmDataset::from_examples(
    std::size_t num_features, const std::vector<std::vector<std::pair<std::int32_t, double>>>& rows,
    std::vector<double> labels) {
  if (rows.size() != labels.size()) throw std::invalid_argument("SvmDataset: label count mismatch");
  for (double y : labels)
    if (y != 1.0 && y != -1.0) throw std::invalid_argument("SvmDataset: labels must be +1 or -1");
  std::vector<Triplet> t;
  for (std::size_t j = 0; j < rows.size(); ++j)
    for (const auto& [f, v] : rows[j]) t.push_back({f, static_cast<std::int32_t>(j), v});
  SvmDataset d;
  d.by_example = CscMatrix::from_triplets(num_features, rows.size(), std::move(t));
  d.by_feature = d.by_example.transpose();
  d.labels = std::move(labels);
  return d;
}

bool SvmDataset::layouts_consistent() const {
  return by_example.rows() == by_feature.cols() && by_example.cols() == by_feature.rows() &&
         by_feature.transpose() == by_example;
}

// ------------------------------------------------------------------ LIBSVM

SvmDataset parse_libsvm(std::istream& in, std::string_view name, std::size_t min_features) {
  std::vector<std::vector<std::pair<std::int32_t, double>>> rows;
  std::vector<double> raw_labels;
  std::vector<std::size_t> line_of;
  std::size_t max_index = 0, line_no = 0;
  std::string line;
  auto fail = [&](const std::string& msg) -> void {
    throw IoError(std::string(name) + ":" + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;  // blank line
    char* end = nullptr;
    const double label = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size()) fail("bad label '" + tok + "'");
    if (label != 1.0 && label != -1.0 && label != 0.0) fail("label must be -1, +1, 0 or 1");
    std::vector<std::pair<std::int32_t, double>> feats;
    while (ls >> tok) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos || colon == 0) fail("expected index:value, got '" + tok + "'");
      const std::string is = tok.substr(0, colon), vs = tok.substr(colon + 1);
      char* e1 = nullptr;
      const long long idx = std::strtoll(is.c_str(), &e1, 10);
      if (e1 != is.c_str() + is.size() || idx < 1 || idx > (1LL << 31) - 1)
        fail("bad feature index '" + is + "'");
      char* e2 = nullptr;
      const double v = std::strtod(vs.c_str(), &e2);
      if (vs.empty() || e2 != vs.c_str() + vs.size() || !std::isfinite(v)) fail("bad feature value '" + vs + "'");
      feats.emplace_back(static_cast<std::int32_t>(idx - 1), v);
      max_index = std::max(max_index, static_cast<std::size_t>(idx));
    }
    std::sort(feats.begin(), feats.end());
    for (std::size_t k = 1; k < feats.size(); ++k)
      if (feats[k].first == feats[k - 1].first) fail("duplicate feature index " + std::to_string(feats[k].first + 1));
    rows.push_back(std::move(feats));
    raw_labels.push_back(label);
    line_of.push_back(line_no);
  }
  if (in.bad()) throw IoError(std::string(name) + ": read error");
  const bool zero_one = std::any_of(raw_labels.begin(), raw_labels.end(), [](double y) { return y == 0.0; });
  for (std::size_t j = 0; j < raw_labels.size(); ++j) {
    if (zero_one && raw_labels[j] == -1.0) {
      line_no = line_of[j];
      fail("labels mix the {0,1} and {-1,+1} conventions");
    }
    if (raw_labels[j] == 0.0) raw_labels[j] = -1.0;
  }
  return SvmDataset::from_examples(std::max(max_index, min_features), rows, std::move(raw_labels));
}

SvmDataset load_libsvm(const std::filesystem::path& path, std::size_t min_features) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path.string());
  return parse_libsvm(in, path.string(), min_features);
}

void write_libsvm(const SvmDataset& data, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  char buf[48];
  for (std::size_t j = 0; j < data.num_examples(); ++j) {
    out << (data.labels[j] > 0 ? "+1" : "-1");
    const auto col = data.by_example.column(j);
    for (std::size_t k = 0; k < col.nnz(); ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", col.value[k]);
      out << ' ' << col.index[k] + 1 << ':' << buf;
    }
    out << '\n';
  }
  out.close();
  if (!out) throw IoError("write failed: " + path.string());
}

// -------------------------------------------------------------------- loss

std::string_view loss_name(SvmLoss loss) { return loss == SvmLoss::l2svm ? "l2svm" : "logistic"; }

SvmLoss parse_loss(std::string_view text) {
  if (text == "l2svm" || text == "l2-svm") return SvmLoss::l2svm;
  if (text == "logistic" || text == "lg") return SvmLoss::logistic;
  throw std::invalid_argument("unknown loss '" + std::string(text) + "'");
}

double loss_value(SvmLoss loss, double r) {
  if (loss == SvmLoss::l2svm) {
    const double h = std::max(0.0, 1.0 + r);
    return h * h;
  }
  // log(1 + e^r)
  return std::max(r, 0.0) + std::log1p(std::exp(-std::abs(r)));
}

double loss_derivative(SvmLoss loss, double r) {
  if (loss == SvmLoss::l2svm) return 2.0 * std::max(0.0, 1.0 + r);
  // e^r / (1 + e^r)
  return r <= 0.0 ? 1.0 / (1.0 + std::exp(-r)) : 1.0 - 1.0 / (1.0 + std::exp(r));
}

// ------------------------------------------------------------------ oracle

SvmOracle::SvmOracle(const SvmDataset& data, SvmLoss loss, double gamma)
    : data_(&data),
      loss_(loss),
      gamma_(gamma),
      part_(BlockPartition::singletons(data.num_features())),
      norm_(BlockNorm::euclidean(data.num_features())) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("SvmOracle: gamma must be > 0");
  const auto& A = data.by_feature;
  z_.resize(A.nnz());
  const auto idx = A.row_idx();
  const auto val = A.values();
  for (std::size_t k = 0; k < z_.size(); ++k) z_[k] = data.labels[static_cast<std::size_t>(idx[k])] * val[k];
  const double c = loss == SvmLoss::l2svm ? 2.0 * gamma : 0.25 * gamma;
  lipschitz_.resize(A.cols());
  const auto ptr = A.col_ptr();
  for (std::size_t i = 0; i < A.cols(); ++i) {
    const auto b = static_cast<std::size_t>(ptr[i]), e = static_cast<std::size_t>(ptr[i + 1]);
    lipschitz_[i] = c * kernels::active().sum_squares(z_.data() + b, e - b);
  }
}

std::vector<double> SvmOracle::margins_at(std::span<const double> w) const {
  if (w.size() != data_->num_features()) throw std::invalid_argument("SvmOracle: dimension mismatch");
  std::vector<double> r(data_->num_examples());
  data_->by_example.multiply_transpose(w, r);
  for (std::size_t j = 0; j < r.size(); ++j) r[j] *= -data_->labels[j];
  return r;
}

SvmOracle::State SvmOracle::make_state(std::span<const double> w0) const {
  return State{std::vector<double>(w0.begin(), w0.end()), margins_at(w0), 0};
}

double SvmOracle::value(const State& s) const {
  double v = 0.0;
  for (double r : s.r) v += loss_value(loss_, r);
  return gamma_ * v;
}

double SvmOracle::value_at(std::span<const double> w) const {
  double v = 0.0;
  for (double r : margins_at(w)) v += loss_value(loss_, r);
  return gamma_ * v;
}

void SvmOracle::block_gradient(const State& s, std::size_t i, std::span<double> out) const {
  const auto ptr = data_->by_feature.col_ptr();
  const auto b = static_cast<std::size_t>(ptr[i]), e = static_cast<std::size_t>(ptr[i + 1]);
  const std::int32_t* idx = data_->by_feature.row_idx().data() + b;
  const double* z = z_.data() + b;
  s.touches += e - b;
  if (loss_ == SvmLoss::l2svm) {
    out[0] = -2.0 * gamma_ * kernels::active().gather_hinge(z, idx, e - b, s.r.data());
    return;
  }
  double acc = 0.0;
  for (std::size_t k = 0; k < e - b; ++k) acc += z[k] * loss_derivative(loss_, s.r[static_cast<std::size_t>(idx[k])]);
  out[0] = -gamma_ * acc;
}

double SvmOracle::apply_step(State& s, std::size_t i, std::span<const double> t) const {
  const auto ptr = data_->by_feature.col_ptr();
  const auto b = static_cast<std::size_t>(ptr[i]), e = static_cast<std::size_t>(ptr[i + 1]);
  const std::int32_t* idx = data_->by_feature.row_idx().data() + b;
  const double* z = z_.data() + b;
  const double step = t[0];
  s.x[i] += step;
  s.touches += e - b;
  double df = 0.0;
  for (std::size_t k = 0; k < e - b; ++k) {
    double& r = s.r[static_cast<std::size_t>(idx[k])];
    const double before = loss_value(loss_, r);
    r -= step * z[k];
    df += loss_value(loss_, r) - before;
  }
  return gamma_ * df;
}

double SvmOracle::refresh(State& s) const {
  auto fresh = margins_at(s.x);
  double scale = 1.0, diff = 0.0;
  for (std::size_t j = 0; j < fresh.size(); ++j) {
    scale = std::max(scale, std::abs(fresh[j]));
    diff = std::max(diff, std::abs(fresh[j] - s.r[j]));
  }
  s.r = std::move(fresh);
  return diff / scale;
}

double evaluate_accuracy(std::span<const double> w, const SvmDataset& data) {
  if (w.size() != data.num_features()) throw std::invalid_argument("evaluate_accuracy: dimension mismatch");
  if (data.num_examples() == 0) return 0.0;
  std::vector<double> s(data.num_examples());
  data.by_example.multiply_transpose(w, s);
  std::size_t ok = 0;
  for (std::size_t j = 0; j < s.size(); ++j) ok += (s[j] * data.labels[j] > 0.0);
  return static_cast<double>(ok) / static_cast<double>(s.size());
}

// ------------------------------------------------------------------- model

void write_svm_model(const SvmModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", model.gamma);
  out << "loss " << loss_name(model.loss) << '\n' << "gamma " << buf << '\n'
      << "n_features " << model.w.size() << '\n';
  for (std::size_t i = 0; i < model.w.size(); ++i) {
    if (model.w[i] == 0.0) continue;
    std::snprintf(buf, sizeof buf, "%.17g", model.w[i]);
    out << i + 1 << ' ' << buf << '\n';
  }
  out.close();
  if (!out) throw IoError("write failed: " + path.string());
}

SvmModel read_svm_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path.string());
  SvmModel m;
  std::string key, loss;
  std::size_t n = 0;
  auto bad = [&](const std::string& what) { return IoError(path.string() + ": " + what); };
  if (!(in >> key >> loss) || key != "loss") throw bad("missing 'loss' header");
  try {
    m.loss = parse_loss(loss);
  } catch (const std::invalid_argument& e) {
    throw bad(e.what());
  }
  std::string gs;
  if (!(in >> key >> gs) || key != "gamma") throw bad("missing 'gamma' header");
  m.gamma = std::strtod(gs.c_str(), nullptr);
  if (!(in >> key >> n) || key != "n_features") throw bad("missing 'n_features' header");
  m.w.assign(n, 0.0);
  std::size_t idx;
  std::string vs;
  while (in >> idx >> vs) {
    if (idx < 1 || idx > n) throw bad("weight index out of range");
    char* end = nullptr;
    m.w[idx - 1] = std::strtod(vs.c_str(), &end);
    if (end != vs.c_str() + vs.size()) throw bad("bad weight '" + vs + "'");
  }
  if (!in.eof()) throw bad("malformed weight line");
  return m;
}

SvmDataset generate_separable(std::size_t m, std::size_t n, std::size_t nnz_per_example,
                              std::uint64_t seed, double margin) {
  if (m == 0 || n == 0 || nnz_per_example == 0 || nnz_per_example > n)
    throw std::invalid_argument("generate_separable: invalid sizes");
  CounterRng rng(seed, 0);
  std::vector<double> hidden(n);
  for (auto& v : hidden) v = rng.uniform(-1.0, 1.0);
  std::vector<std::vector<std::pair<std::int32_t, double>>> rows(m);
  std::vector<double> labels(m);
  for (std::size_t j = 0; j < m; ++j) {
    for (;;) {
      auto& feats = rows[j];
      feats.clear();
      while (feats.size() < nnz_per_example) {
        const auto f = static_cast<std::int32_t>(rng.bounded(n));
        if (std::none_of(feats.begin(), feats.end(), [&](const auto& p) { return p.first == f; }))
          feats.emplace_back(f, rng.uniform(-1.0, 1.0));
      }
      std::sort(feats.begin(), feats.end());
      double s = 0.0;
      for (const auto& [f, v] : feats) s += hidden[static_cast<std::size_t>(f)] * v;
      if (std::abs(s) >= margin) {
        labels[j] = s > 0.0 ? 1.0 : -1.0;
        break;
      }
    }
  }
  return SvmDataset::from_examples(n, rows, std::move(labels));
}

}  // namespace rcd
