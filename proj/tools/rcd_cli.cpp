// rcd: command-line front end for the coordinate descent library.
//
// Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 I/O error.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "rcd/bounds.hpp"
#include "rcd/errors.hpp"
#include "rcd/kernels.hpp"
#include "rcd/lasso.hpp"
#include "rcd/solvers.hpp"
#include "rcd/svm.hpp"
#include "rcd/trace.hpp"

namespace {

using namespace rcd;

void write_vector(const std::vector<double>& x, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "# index value (0-based, nonzeros only), dimension " << x.size() << '\n' << x.size() << '\n';
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] != 0.0) out << i << ' ' << format_double(x[i]) << '\n';
  out.close();
  if (!out) throw IoError("write failed: " + path);
}

std::vector<double> read_vector(const std::string& path, std::size_t expected) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  std::string line;
  std::size_t n = 0;
  bool have_n = false;
  std::vector<double> x;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    if (!have_n) {
      if (!(ls >> n)) throw IoError(path + ":" + std::to_string(line_no) + ": expected dimension");
      if (n != expected) throw std::invalid_argument("vector file has dimension " + std::to_string(n) + ", expected " + std::to_string(expected));
      x.assign(n, 0.0);
      have_n = true;
      continue;
    }
    std::size_t i;
    std::string v;
    if (!(ls >> i >> v) || i >= n) throw IoError(path + ":" + std::to_string(line_no) + ": bad entry");
    x[i] = std::stod(v);
  }
  if (!have_n) throw IoError(path + ": empty vector file");
  return x;
}

std::vector<std::size_t> parse_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(static_cast<std::size_t>(std::stod(tok)));
  if (out.empty()) throw std::invalid_argument("empty list '" + text + "'");
  return out;
}

void print_kv(const std::string& key, double v) { std::cout << key << ' ' << format_double(v) << '\n'; }
void print_count(const std::string& key, std::uint64_t v) { std::cout << key << ' ' << v << '\n'; }

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  GeneratorOptions opt;
  std::string profile = "natural";
  std::string out;
  bool text = false;
};

void cmd_generate(const GenerateArgs& a) {
  GeneratorOptions opt = a.opt;
  static const std::map<std::string, LipschitzProfile> profiles{
      {"natural", LipschitzProfile::natural}, {"uniform", LipschitzProfile::uniform},
      {"log-uniform", LipschitzProfile::log_uniform}, {"two-level", LipschitzProfile::two_level}};
  opt.profile = profiles.at(a.profile);
  const auto inst = generate_lasso(opt);
  if (a.text) write_lasso_text(inst, a.out);
  else write_lasso_binary(inst, a.out);
  print_kv("F*", inst.certificate->optimal_value);
  std::cout << "nnz_A " << inst.A.nnz() << "\nnnz_x " << inst.certificate->support.size() << '\n';
}

void cmd_verify(const std::string& path) {
  const auto inst = read_lasso(path);
  std::cout << "m " << inst.rows() << "\nn " << inst.cols() << "\nnnz_A " << inst.A.nnz() << '\n';
  print_kv("lambda", inst.lambda);
  if (!inst.certificate) {
    std::cout << "certificate none\n";
    return;
  }
  const auto c = verify_certificate(inst);
  print_kv("optimality_residual", c.optimality_residual);
  print_kv("value_error", c.value_error);
  std::cout << "certificate " << (c.passed() ? "ok" : "FAILED") << '\n';
  if (!c.passed()) throw NumericalError("certificate check failed");
}

// ------------------------------------------------------------------- solve

struct SolveArgs {
  std::string instance;
  std::string algo = "ucdc";
  double alpha = 0.0;
  double q = 0.0;
  double k0_epochs = 0.0;
  std::string x0 = "zero";
  double ls_epochs = 50.0;
  double epochs = 100.0;
  std::optional<double> target;
  std::optional<double> target_ratio;
  double trace_every = 1.0;
  std::uint64_t seed = 0;
  std::string trace_out;
  std::string solution_out;
};

void cmd_solve(const SolveArgs& a) {
  const auto inst = read_lasso(a.instance);
  const LassoProblem problem(inst);
  const std::size_t n = inst.cols();

  std::vector<double> x0;
  if (a.x0 == "zero") x0.assign(n, 0.0);
  else if (a.x0 == "ls") x0 = least_squares_start(inst, a.ls_epochs, a.seed + 1);
  else x0 = read_vector(a.x0, n);

  ProbabilityLaw law = UniformLaw{};
  if (a.q > 0.0) law = QShrinkingLaw{a.q, static_cast<std::uint64_t>(a.k0_epochs * static_cast<double>(n))};
  else if (a.alpha != 0.0) law = PowerLaw{a.alpha};

  SolveConfig cfg;
  cfg.seed = a.seed;
  cfg.max_epochs = a.epochs;
  cfg.target = a.target;
  cfg.target_ratio = a.target_ratio;
  cfg.trace_every = a.trace_every;

  SolveResult res;
  if (a.algo == "ucdc") {
    if (law.index() != 0) throw std::invalid_argument("ucdc uses uniform probabilities; use --algo rcdc with --alpha/--q");
    res = ucdc_run(problem, x0, cfg);
  } else if (a.algo == "rcdc") {
    res = rcdc_run(problem, law, x0, cfg);
  } else if (a.algo == "rcds") {
    if (inst.lambda != 0.0) throw std::invalid_argument("rcds requires lambda = 0 (smooth objective)");
    res = rcds_run(problem, law, x0, cfg);
  } else {
    throw std::invalid_argument("unknown --algo '" + a.algo + "'");
  }

  if (!a.trace_out.empty()) write_trace_csv(a.trace_out, res.trace);
  else write_trace_csv(std::cout, res.trace);
  if (!a.solution_out.empty()) write_vector(res.x, a.solution_out);
  std::cerr << "iterations " << res.report.iterations << "\nresidual " << format_double(res.report.final_residual)
            << "\nobjective " << format_double(res.report.final_objective) << "\nstop "
            << (res.report.stop == StopReason::target ? "target" : "budget") << '\n';
}

// ------------------------------------------------------------------ bounds

struct BoundsArgs {
  std::string theorem;
  std::size_t n = 1;
  double c = 0, xi0 = 0, eps = 0, rho = 0.1, r_sq = 0, mu = 0, dist_sq = 0, l_full = 0;
  std::string lipschitz, u_sq;
};

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

void cmd_bounds(const BoundsArgs& a) {
  const auto& t = a.theorem;
  if (t == "gamma") print_kv("gamma_mu", gamma_mu(a.mu));
  else if (t == "theorem1-i") print_count("K", k_theorem1(a.c, a.xi0, a.eps, a.rho, DecayProperty::quadratic));
  else if (t == "theorem1-ii") print_count("K", k_theorem1(a.c, a.xi0, a.eps, a.rho, DecayProperty::linear));
  else if (t == "restart") {
    const auto p = restart_plan(a.c, a.xi0, a.eps, a.rho);
    std::cout << "runs " << p.runs << "\niterations_per_run " << p.iterations_per_run << "\nK " << p.total() << '\n';
  } else if (t == "ucdc-convex") {
    // Each variant has its own precondition; report whichever apply.
    bool any = false;
    try {
      print_count("K_a", static_cast<std::uint64_t>(std::max(0.0, std::ceil(k_ucdc_convex_a_real(a.n, a.r_sq, a.xi0, a.eps, a.rho)))));
      any = true;
    } catch (const std::invalid_argument& e) {
      std::cout << "K_a n/a (" << e.what() << ")\n";
    }
    try {
      print_count("K_b", static_cast<std::uint64_t>(std::max(0.0, std::ceil(k_ucdc_convex_b_real(a.n, a.r_sq, a.xi0, a.eps, a.rho)))));
      any = true;
    } catch (const std::invalid_argument& e) {
      std::cout << "K_b n/a (" << e.what() << ")\n";
    }
    if (!any) throw std::invalid_argument("no variant applies to these inputs");
  } else if (t == "ucdc-strong") print_count("K", k_ucdc_strong(a.n, a.mu, a.xi0, a.eps, a.rho));
  else if (t == "regularized") {
    print_kv("mu", regularization_mu(a.eps, a.dist_sq));
    print_count("K", k_regularized(a.n, a.dist_sq, a.xi0, a.eps, a.rho));
  } else if (t == "rcds-convex") {
    const auto k = k_rcds_convex(a.r_sq, a.xi0, a.eps, a.rho);
    std::cout << "K_a " << k.a << "\nK_b " << k.b << '\n';
  } else if (t == "rcds-strong") print_count("K", k_rcds_strong(a.mu, a.xi0, a.eps, a.rho));
  else if (t == "compare") {
    const auto L = parse_doubles(a.lipschitz), u = parse_doubles(a.u_sq);
    for (const auto& row : comparison_table(a.l_full, L, u, a.eps))
      std::cout << row.method << " | " << row.constant << " | " << format_double(row.leading_term) << '\n';
  } else {
    throw std::invalid_argument("unknown theorem '" + t + "'");
  }
}

// ------------------------------------------------------------------- bench

struct BenchArgs {
  std::size_t m = 1000000, n = 100000;
  std::string nnz_a = "100000,1000000,10000000";
  std::string nnz_x = "100,1000,10000";
  double lambda = 1.0;
  std::size_t seeds = 1;
  double epochs = 10.0;
  std::string out;
};

void cmd_bench(const BenchArgs& a) {
  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!a.out.empty()) {
    file.open(a.out);
    if (!file) throw IoError("cannot open for writing: " + a.out);
    os = &file;
  }
  *os << "m,n,nnz_a,nnz_x,seed,epochs,time_per_epoch_s,final_residual_ratio\n";
  for (auto nx : parse_list(a.nnz_x))
    for (auto na : parse_list(a.nnz_a))
      for (std::size_t s = 0; s < a.seeds; ++s) {
        GeneratorOptions opt{a.m, a.n, na, nx, a.lambda, s};
        const auto inst = generate_lasso(opt);
        const LassoProblem p(inst);
        SolveConfig cfg;
        cfg.seed = s;
        cfg.max_epochs = a.epochs;
        cfg.trace_every = 0.0;
        cfg.checks_per_epoch = 1;
        cfg.decade_rows = false;
        const std::vector<double> x0(a.n, 0.0);
        const auto r = ucdc_run(p, x0, cfg);
        *os << a.m << ',' << a.n << ',' << na << ',' << nx << ',' << s << ',' << format_double(a.epochs) << ','
            << format_double(r.report.elapsed_s / a.epochs) << ','
            << format_double(r.report.final_residual / r.report.residual0) << '\n';
      }
}

// --------------------------------------------------------------------- svm

struct SvmArgs {
  std::string data, test, model, loss = "l2svm", accuracy_out, out;
  double gamma = 1.0, epochs = 10.0, scale = 1.0;
  std::uint64_t seed = 0;
  std::size_t m = 10000, n = 1000, nnz = 20;
};

void cmd_svm_train(const SvmArgs& a) {
  const auto train = load_libsvm(a.data);
  const SvmOracle oracle(train, parse_loss(a.loss), a.gamma);
  const SvmProblem problem(oracle, L1Regularizer(a.scale));
  std::vector<double> w(train.num_features(), 0.0);
  std::optional<SvmDataset> test;
  if (!a.test.empty()) test = load_libsvm(a.test, train.num_features());

  std::ofstream acc;
  if (!a.accuracy_out.empty()) {
    acc.open(a.accuracy_out);
    if (!acc) throw IoError("cannot open for writing: " + a.accuracy_out);
    acc << "epoch,objective,nnz,train_accuracy" << (test ? ",test_accuracy" : "") << '\n';
  }
  // One solver call per epoch on a continuing stream keeps the accuracy
  // curve cheap to record.
  const auto epochs = static_cast<std::size_t>(std::ceil(a.epochs));
  double objective = full_objective(problem, w);
  for (std::size_t e = 1; e <= epochs; ++e) {
    SolveConfig cfg;
    cfg.seed = a.seed;
    cfg.stream = e;
    cfg.max_epochs = 1.0;
    cfg.trace_every = 0.0;
    cfg.decade_rows = false;
    auto r = ucdc_run(problem, w, cfg);
    w = std::move(r.x);
    objective = r.report.final_objective;
    if (acc.is_open()) {
      std::size_t nnz = 0;
      for (double v : w) nnz += (v != 0.0);
      acc << e << ',' << format_double(objective) << ',' << nnz << ',' << format_double(evaluate_accuracy(w, train));
      if (test) acc << ',' << format_double(evaluate_accuracy(w, *test));
      acc << '\n';
    }
  }
  print_kv("objective", objective);
  print_kv("train_accuracy", evaluate_accuracy(w, train));
  if (test) print_kv("test_accuracy", evaluate_accuracy(w, *test));
  if (!a.model.empty()) write_svm_model(SvmModel{parse_loss(a.loss), a.gamma, w}, a.model);
}

void cmd_svm_eval(const SvmArgs& a) {
  const auto model = read_svm_model(a.model);
  const auto data = load_libsvm(a.data, model.w.size());
  if (data.num_features() != model.w.size())
    throw std::invalid_argument("data has more features than the model");
  print_kv("accuracy", evaluate_accuracy(model.w, data));
}

void cmd_svm_generate(const SvmArgs& a) {
  write_libsvm(generate_separable(a.m, a.n, a.nnz, a.seed), a.out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized coordinate descent for composite convex problems"};
  app.set_config("--config", "", "TOML/INI file with option values (flags override it)");
  app.allow_config_extras(false);
  app.require_subcommand(1);
  std::string isa;
  app.add_option("--isa", isa, "Kernel set: scalar, avx2 or avx512 (default: auto)");

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Generate a Lasso instance with a certified optimum");
  g->add_option("--m", gen.opt.m, "Rows")->required();
  g->add_option("--n", gen.opt.n, "Columns")->required();
  g->add_option("--nnz-a", gen.opt.nnz_a, "Nonzeros of A")->required();
  g->add_option("--nnz-x", gen.opt.nnz_x, "Nonzeros of x*")->required();
  g->add_option("--lambda", gen.opt.lambda, "L1 weight")->capture_default_str();
  g->add_option("--seed", gen.opt.seed, "Seed")->capture_default_str();
  g->add_option("--profile", gen.profile, "Column Lipschitz profile (lambda = 0 only)")
      ->check(CLI::IsMember({"natural", "uniform", "log-uniform", "two-level"}))
      ->capture_default_str();
  g->add_option("--profile-lo", gen.opt.profile_lo, "log10 L lower value")->capture_default_str();
  g->add_option("--profile-hi", gen.opt.profile_hi, "log10 L upper value")->capture_default_str();
  g->add_option("--low-fraction", gen.opt.low_fraction, "two-level: fraction of low columns")->capture_default_str();
  g->add_option("--out", gen.out, "Output file")->required();
  g->add_flag("--text", gen.text, "Write the text format");

  std::string verify_path;
  auto* v = app.add_subcommand("verify", "Check an instance file and its certificate");
  v->add_option("instance", verify_path, "Instance file")->required();

  SolveArgs sa;
  auto* s = app.add_subcommand("solve", "Run a solver on a Lasso instance and emit a trace CSV");
  s->add_option("--instance", sa.instance, "Instance file")->required();
  s->add_option("--algo", sa.algo, "ucdc, rcdc or rcds")->check(CLI::IsMember({"ucdc", "rcdc", "rcds"}))->capture_default_str();
  s->add_option("--alpha", sa.alpha, "Power-law exponent, p_i ~ L_i^alpha")->capture_default_str();
  s->add_option("--q", sa.q, "q-shrinking fraction")->capture_default_str();
  s->add_option("--k0", sa.k0_epochs, "q-shrinking start, in epochs")->capture_default_str();
  s->add_option("--x0", sa.x0, "zero, ls, or a vector file")->capture_default_str();
  s->add_option("--ls-epochs", sa.ls_epochs, "Epochs for the least-squares start")->capture_default_str();
  s->add_option("--epochs", sa.epochs, "Epoch budget")->capture_default_str();
  s->add_option("--target", sa.target, "Stop at residual <= target (needs F*)");
  s->add_option("--target-ratio", sa.target_ratio, "Stop at residual <= ratio * initial residual");
  s->add_option("--trace-every", sa.trace_every, "Epochs between trace rows")->capture_default_str();
  s->add_option("--seed", sa.seed, "Seed")->capture_default_str();
  s->add_option("--trace-out", sa.trace_out, "Trace CSV (default: stdout)");
  s->add_option("--solution-out", sa.solution_out, "Write the final iterate");

  BoundsArgs ba;
  auto* b = app.add_subcommand("bounds", "Evaluate an iteration complexity bound");
  b->add_option("--theorem", ba.theorem,
                "gamma, theorem1-i, theorem1-ii, restart, ucdc-convex, ucdc-strong, regularized, rcds-convex, rcds-strong, compare")
      ->required();
  b->add_option("--n", ba.n, "Number of blocks");
  b->add_option("--c", ba.c, "Decay constant c");
  b->add_option("--xi0", ba.xi0, "Initial residual");
  b->add_option("--eps", ba.eps, "Target accuracy");
  b->add_option("--rho", ba.rho, "Confidence level")->capture_default_str();
  b->add_option("--r-sq", ba.r_sq, "Squared level-set radius");
  b->add_option("--mu", ba.mu, "Strong convexity parameter");
  b->add_option("--dist-sq", ba.dist_sq, "||x0 - x*||_L^2");
  b->add_option("--l-full", ba.l_full, "Lipschitz constant of the full gradient (compare)");
  b->add_option("--lipschitz", ba.lipschitz, "Comma-separated L_i (compare)");
  b->add_option("--u-sq", ba.u_sq, "Comma-separated (u^(i))^2 (compare)");

  BenchArgs be;
  auto* bench = app.add_subcommand("bench", "Time per epoch over a grid of sparsity levels");
  bench->add_option("--m", be.m, "Rows")->capture_default_str();
  bench->add_option("--n", be.n, "Columns")->capture_default_str();
  bench->add_option("--nnz-a", be.nnz_a, "Comma-separated nnz(A) values")->capture_default_str();
  bench->add_option("--nnz-x", be.nnz_x, "Comma-separated nnz(x*) values")->capture_default_str();
  bench->add_option("--lambda", be.lambda, "L1 weight")->capture_default_str();
  bench->add_option("--seeds", be.seeds, "Seeds per grid point")->capture_default_str();
  bench->add_option("--epochs", be.epochs, "Timed epochs")->capture_default_str();
  bench->add_option("--out", be.out, "CSV output (default: stdout)");

  SvmArgs va;
  auto* svm = app.add_subcommand("svm", "L1-regularized linear classification");
  svm->require_subcommand(1);
  auto* train = svm->add_subcommand("train", "Train on a LIBSVM file");
  train->add_option("--data", va.data, "Training data (LIBSVM)")->required();
  train->add_option("--test", va.test, "Test data (LIBSVM)");
  train->add_option("--loss", va.loss, "l2svm or logistic")->check(CLI::IsMember({"l2svm", "logistic"}))->capture_default_str();
  train->add_option("--gamma", va.gamma, "Loss weight")->capture_default_str();
  train->add_option("--scale", va.scale, "L1 weight")->capture_default_str();
  train->add_option("--epochs", va.epochs, "Epochs")->capture_default_str();
  train->add_option("--seed", va.seed, "Seed")->capture_default_str();
  train->add_option("--model", va.model, "Model output file");
  train->add_option("--accuracy-out", va.accuracy_out, "Per-epoch accuracy CSV");
  auto* eval = svm->add_subcommand("eval", "Accuracy of a saved model");
  eval->add_option("--data", va.data, "Data (LIBSVM)")->required();
  eval->add_option("--model", va.model, "Model file")->required();
  auto* sgen = svm->add_subcommand("generate", "Write a synthetic separable dataset");
  sgen->add_option("--m", va.m, "Examples")->capture_default_str();
  sgen->add_option("--n", va.n, "Features")->capture_default_str();
  sgen->add_option("--nnz", va.nnz, "Features per example")->capture_default_str();
  sgen->add_option("--seed", va.seed, "Seed")->capture_default_str();
  sgen->add_option("--out", va.out, "Output file")->required();

  for (auto* sub : {g, v, s, b, bench, svm, train, eval, sgen}) sub->allow_config_extras(false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (!isa.empty()) kernels::select(kernels::parse_isa(isa));
    if (*g) cmd_generate(gen);
    else if (*v) cmd_verify(verify_path);
    else if (*s) cmd_solve(sa);
    else if (*b) cmd_bounds(ba);
    else if (*bench) cmd_bench(be);
    else if (*train) cmd_svm_train(va);
    else if (*eval) cmd_svm_eval(va);
    else if (*sgen) cmd_svm_generate(va);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
