#include <bit>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "rcd/errors.hpp"
#include "rcd/lasso.hpp"

namespace rcd {

namespace {

constexpr char kMagic[8] = {'R', 'C', 'D', 'L', 'A', 'S', 'S', 'O'};
constexpr char kTextMagic[] = "rcd-lasso-text";
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little, "binary format assumes little-endian host");

class Writer {
 public:
  explicit Writer(const std::filesystem::path& p) : path_(p), out_(p, std::ios::binary) {
    if (!out_) throw IoError("cannot open for writing: " + p.string());
  }
  template <class T>
  void put(const T& v) { raw(&v, sizeof(T)); }
  template <class T>
  void put_all(const std::vector<T>& v) { raw(v.data(), v.size() * sizeof(T)); }
  template <class T>
  void put_all(std::span<const T> v) { raw(v.data(), v.size() * sizeof(T)); }
  void raw(const void* p, std::size_t n) {
    out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
    if (!out_) throw IoError("write failed: " + path_.string());
  }
  void close() {
    out_.close();
    if (!out_) throw IoError("write failed: " + path_.string());
  }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

class Reader {
 public:
  Reader(std::istream& in, const std::filesystem::path& p) : in_(in), path_(p) {}
  template <class T>
  T get() {
    T v;
    raw(&v, sizeof(T));
    return v;
  }
  template <class T>
  std::vector<T> get_all(std::size_t n) {
    std::vector<T> v(n);
    raw(v.data(), n * sizeof(T));
    return v;
  }
  void raw(void* p, std::size_t n) {
    in_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) throw IoError("truncated instance file: " + path_.string());
  }

 private:
  std::istream& in_;
  std::filesystem::path path_;
};

LassoInstance read_binary(std::istream& in, const std::filesystem::path& path) {
  Reader r(in, path);
  char magic[8];
  r.raw(magic, 8);
  if (std::memcmp(magic, kMagic, 8) != 0) throw IoError("not a lasso instance: " + path.string());
  if (r.get<std::uint32_t>() != kVersion) throw IoError("unsupported instance version: " + path.string());
  const auto m = r.get<std::uint64_t>();
  const auto n = r.get<std::uint64_t>();
  const auto nnz = r.get<std::uint64_t>();
  LassoInstance inst;
  inst.lambda = r.get<double>();
  const auto flags = r.get<std::uint32_t>();
  if (n > (1ULL << 40) || nnz > (1ULL << 40) || m > (1ULL << 31)) throw IoError("implausible header: " + path.string());
  auto ptr = r.get_all<std::int64_t>(n + 1);
  auto idx = r.get_all<std::int32_t>(nnz);
  auto val = r.get_all<double>(nnz);
  try {
    inst.A = CscMatrix(m, n, std::move(ptr), std::move(idx), std::move(val));
  } catch (const std::invalid_argument& e) {
    throw IoError(std::string("corrupt matrix in ") + path.string() + ": " + e.what());
  }
  inst.b = r.get_all<double>(m);
  if (flags & 1u) {
    LassoCertificate c;
    const auto k = r.get<std::uint64_t>();
    if (k > n) throw IoError("corrupt certificate: " + path.string());
    c.support = r.get_all<std::uint32_t>(k);
    c.values = r.get_all<double>(k);
    c.optimal_value = r.get<double>();
    inst.certificate = std::move(c);
  }
  return inst;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class LineParser {
 public:
  LineParser(std::istream& in, const std::filesystem::path& p) : in_(in), path_(p) {}

  std::istringstream next() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      return std::istringstream(line);
    }
    fail("unexpected end of file");
  }

  template <class T>
  T field(std::istringstream& ls) {
    std::string tok;
    if (!(ls >> tok)) fail("missing field");
    if constexpr (std::is_floating_point_v<T>) {
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      if (end != tok.c_str() + tok.size()) fail("bad number '" + tok + "'");
      return v;
    } else {
      char* end = nullptr;
      const long long v = std::strtoll(tok.c_str(), &end, 10);
      if (end != tok.c_str() + tok.size() || v < 0) fail("bad integer '" + tok + "'");
      return static_cast<T>(v);
    }
  }

  void expect(std::istringstream& ls, const std::string& word) {
    std::string tok;
    if (!(ls >> tok) || tok != word) fail("expected '" + word + "'");
  }

  void end(std::istringstream& ls) {
    std::string tok;
    if (ls >> tok) fail("trailing data '" + tok + "'");
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw IoError(path_.string() + ":" + std::to_string(line_no_) + ": " + msg);
  }

 private:
  std::istream& in_;
  std::filesystem::path path_;
  std::size_t line_no_ = 0;
};

LassoInstance read_text(std::istream& in, const std::filesystem::path& path) {
  LineParser p(in, path);
  auto ls = p.next();
  p.expect(ls, kTextMagic);
  if (p.field<std::uint32_t>(ls) != kVersion) p.fail("unsupported version");
  ls = p.next();
  const auto m = p.field<std::size_t>(ls);
  const auto n = p.field<std::size_t>(ls);
  const auto nnz = p.field<std::size_t>(ls);
  LassoInstance inst;
  inst.lambda = p.field<double>(ls);
  const auto has_cert = p.field<int>(ls);
  p.end(ls);

  std::vector<std::int64_t> ptr(n + 1, 0);
  std::vector<std::int32_t> idx(nnz);
  std::vector<double> val(nnz);
  ls = p.next();
  p.expect(ls, "A");
  std::size_t prev_col = 0;
  for (std::size_t k = 0; k < nnz; ++k) {
    ls = p.next();
    const auto col = p.field<std::size_t>(ls);
    if (col >= n || col < prev_col) p.fail("column indices must be sorted and < n");
    prev_col = col;
    ++ptr[col + 1];
    idx[k] = p.field<std::int32_t>(ls);
    val[k] = p.field<double>(ls);
    p.end(ls);
  }
  for (std::size_t j = 0; j < n; ++j) ptr[j + 1] += ptr[j];
  try {
    inst.A = CscMatrix(m, n, std::move(ptr), std::move(idx), std::move(val));
  } catch (const std::invalid_argument& e) {
    p.fail(e.what());
  }
  ls = p.next();
  p.expect(ls, "b");
  inst.b.resize(m);
  for (auto& v : inst.b) {
    ls = p.next();
    v = p.field<double>(ls);
    p.end(ls);
  }
  if (has_cert) {
    ls = p.next();
    p.expect(ls, "certificate");
    LassoCertificate c;
    const auto k = p.field<std::size_t>(ls);
    if (k > n) p.fail("certificate larger than n");
    c.optimal_value = p.field<double>(ls);
    for (std::size_t j = 0; j < k; ++j) {
      ls = p.next();
      const auto i = p.field<std::size_t>(ls);
      if (i >= n) p.fail("certificate index out of range");
      c.support.push_back(static_cast<std::uint32_t>(i));
      c.values.push_back(p.field<double>(ls));
      p.end(ls);
    }
    inst.certificate = std::move(c);
  }
  return inst;
}

}  // namespace

void write_lasso_binary(const LassoInstance& inst, const std::filesystem::path& path) {
  Writer w(path);
  w.raw(kMagic, 8);
  w.put(kVersion);
  w.put<std::uint64_t>(inst.rows());
  w.put<std::uint64_t>(inst.cols());
  w.put<std::uint64_t>(inst.A.nnz());
  w.put(inst.lambda);
  w.put<std::uint32_t>(inst.certificate ? 1u : 0u);
  w.put_all(inst.A.col_ptr());
  w.put_all(inst.A.row_idx());
  w.put_all(inst.A.values());
  w.put_all(inst.b);
  if (inst.certificate) {
    w.put<std::uint64_t>(inst.certificate->support.size());
    w.put_all(inst.certificate->support);
    w.put_all(inst.certificate->values);
    w.put(inst.certificate->optimal_value);
  }
  w.close();
}

void write_lasso_text(const LassoInstance& inst, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << kTextMagic << ' ' << kVersion << '\n';
  out << "# m n nnz lambda has_certificate\n";
  out << inst.rows() << ' ' << inst.cols() << ' ' << inst.A.nnz() << ' ' << fmt(inst.lambda) << ' '
      << (inst.certificate ? 1 : 0) << '\n';
  out << "A\n";
  for (std::size_t j = 0; j < inst.cols(); ++j) {
    const auto col = inst.A.column(j);
    for (std::size_t k = 0; k < col.nnz(); ++k) out << j << ' ' << col.index[k] << ' ' << fmt(col.value[k]) << '\n';
  }
  out << "b\n";
  for (double v : inst.b) out << fmt(v) << '\n';
  if (inst.certificate) {
    const auto& c = *inst.certificate;
    out << "certificate " << c.support.size() << ' ' << fmt(c.optimal_value) << '\n';
    for (std::size_t k = 0; k < c.support.size(); ++k) out << c.support[k] << ' ' << fmt(c.values[k]) << '\n';
  }
  out.close();
  if (!out) throw IoError("write failed: " + path.string());
}

LassoInstance read_lasso(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path.string());
  char head[8] = {};
  in.read(head, 8);
  in.clear();
  in.seekg(0);
  if (std::memcmp(head, kMagic, 8) == 0) return read_binary(in, path);
  return read_text(in, path);
}

}  // namespace rcd
