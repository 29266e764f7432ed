// permlab: exact block-uniform permanents, scaling asymptotics, and kernel
// trend checks from the command line. Exit codes: 0 success, 1 input error,
// 2 verification failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "permlab/asymptotics.hpp"
#include "permlab/block_permanent.hpp"
#include "permlab/errors.hpp"
#include "permlab/fluctuations.hpp"
#include "permlab/format.hpp"
#include "permlab/kernel.hpp"
#include "permlab/permanent.hpp"
#include "permlab/scaling.hpp"

namespace {

using nlohmann::json;
using namespace permlab;

DenseMatrix load_seed_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input file " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed JSON input: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("m") || !doc.contains("entries"))
    throw InputError("input JSON must be {\"m\": <int>, \"entries\": [[...], ...]}");
  const auto m = doc["m"].get<std::int64_t>();
  if (m < 1) throw InputError("input JSON: m must be >= 1");
  const auto& rows = doc["entries"];
  if (!rows.is_array() || rows.size() != static_cast<std::size_t>(m))
    throw InputError("input JSON: entries must be an m x m array");
  DenseMatrix b(static_cast<std::size_t>(m), static_cast<std::size_t>(m));
  for (std::size_t r = 0; r < b.rows(); ++r) {
    if (!rows[r].is_array() || rows[r].size() != b.cols())
      throw InputError("input JSON: entries must be an m x m array");
    for (std::size_t s = 0; s < b.cols(); ++s) b(r, s) = rows[r][s].get<double>();
  }
  return b;
}

PositiveBlockMatrix load_positive_seed(const std::string& path) {
  try {
    return PositiveBlockMatrix(load_seed_matrix(path));
  } catch (const DomainError& e) {
    throw InputError(std::string("input rejected: ") + e.what());
  }
}

std::vector<std::size_t> parse_n_list(const std::string& text) {
  std::vector<std::size_t> ns;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      const long long v = std::stoll(tok);
      if (v < 1) throw InputError("n-list entries must be positive");
      ns.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw InputError("bad n-list entry '" + tok + "'");
    }
  }
  if (ns.empty()) throw InputError("empty n-list");
  for (std::size_t i = 1; i < ns.size(); ++i)
    if (ns[i] <= ns[i - 1]) throw InputError("n-list must be strictly increasing");
  return ns;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw InputError("cannot open output file " + out_path);
  out << text;
}

std::string matrix_json(const DenseMatrix& t) {
  std::ostringstream out;
  out << '[';
  for (std::size_t r = 0; r < t.rows(); ++r) {
    if (r) out << ',';
    out << '[';
    for (std::size_t c = 0; c < t.cols(); ++c) {
      if (c) out << ',';
      out << fmt_g17(t(r, c));
    }
    out << ']';
  }
  out << ']';
  return out.str();
}

std::string vector_json(const std::vector<double>& v) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out << ',';
    out << fmt_g17(v[i]);
  }
  out << ']';
  return out.str();
}

std::string table_json(const ContingencyTable& q) {
  std::ostringstream out;
  out << '[';
  for (std::size_t r = 0; r < q.m(); ++r) {
    if (r) out << ',';
    out << '[';
    for (std::size_t s = 0; s < q.m(); ++s) {
      if (s) out << ',';
      out << q(r, s);
    }
    out << ']';
  }
  out << ']';
  return out.str();
}

struct KernelArgs {
  std::string family = "zero";
  double eps = 0.1;
  double sigma = 0.25;
  std::string input;

  KernelSpec make() const {
    if (family == "zero") return KernelSpec::zero();
    if (family == "cosine") return KernelSpec::cosine(eps);
    if (family == "gaussian-bump") return KernelSpec::gaussian_bump(eps, sigma);
    if (family == "block") {
      if (input.empty()) throw InputError("block kernel needs --input seed.json");
      return KernelSpec::block(load_positive_seed(input));
    }
    if (family == "grid") {
      if (input.empty()) throw InputError("grid kernel needs --input grid.csv");
      return KernelSpec::grid_from_csv(input);
    }
    throw InputError("unknown kernel family '" + family + "'");
  }
};

int run(int argc, char** argv) {
  CLI::App app{"block-uniform permanent laboratory"};
  app.require_subcommand(1);

  std::string input, out_path, n_list, format = "json", method = "pinsky";
  std::size_t n = 1, max_iter = 100000, grid = 128, refine = 256, max_dim = 30;
  double tol = 1e-12, verify_tol = 1e-9, budget = 5e8;
  unsigned workers = 1;
  bool allow_zero = false, verify = false;
  std::string kernel_mode = "fredholm";
  KernelArgs kargs;

  auto* scale = app.add_subcommand("scale", "solve the doubly stochastic scaling problem");
  scale->add_option("--input", input, "seed matrix JSON")->required();
  scale->add_option("--tol", tol, "residual tolerance");
  scale->add_option("--max-iter", max_iter, "iteration cap");
  scale->add_option("--out", out_path, "output path (default stdout)");

  auto* perm = app.add_subcommand("perm", "normalized log permanent of the block expansion");
  perm->add_option("--method", method, "naive | ryser | pinsky")
      ->check(CLI::IsMember({"naive", "ryser", "pinsky"}));
  perm->add_option("--input", input, "seed matrix JSON")->required();
  perm->add_option("--n", n, "block size")->required();
  perm->add_option("--workers", workers, "worker count");
  perm->add_option("--budget", budget, "table budget (pinsky)");
  perm->add_flag("--allow-zero", allow_zero, "accept zero entries (pinsky only)");
  perm->add_option("--max-dim", max_dim, "ryser dimension cap override");
  perm->add_option("--out", out_path, "output path");

  auto* predict = app.add_subcommand("predict", "asymptotic prediction for the ratio");
  predict->add_option("--input", input, "seed matrix JSON")->required();
  predict->add_option("--n", n, "block size")->required();
  predict->add_option("--out", out_path, "output path");

  auto* sweep = app.add_subcommand("sweep", "exact vs predicted ratio across n");
  sweep->add_option("--input", input, "seed matrix JSON")->required();
  sweep->add_option("--n", n_list, "comma-separated n list")->required();
  sweep->add_option("--workers", workers, "worker count");
  sweep->add_option("--budget", budget, "table budget");
  sweep->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  sweep->add_option("--out", out_path, "output path");

  auto* fluct = app.add_subcommand("fluct", "determinant-identity suite for the scaled seed");
  fluct->add_option("--input", input, "seed matrix JSON")->required();
  fluct->add_flag("--verify", verify, "exit 2 unless every identity passes");
  fluct->add_option("--tol", verify_tol, "identity tolerance");
  fluct->add_option("--out", out_path, "output path");

  auto* kernel = app.add_subcommand("kernel", "kernel discretization reports");
  kernel->add_option("--mode", kernel_mode, "fredholm | trend")
      ->check(CLI::IsMember({"fredholm", "trend"}));
  kernel->add_option("--family", kargs.family, "zero | cosine | gaussian-bump | block | grid")
      ->check(CLI::IsMember({"zero", "cosine", "gaussian-bump", "block", "grid"}));
  kernel->add_option("--eps", kargs.eps, "kernel amplitude");
  kernel->add_option("--sigma", kargs.sigma, "gaussian-bump width");
  kernel->add_option("--input", kargs.input, "seed JSON (block) or grid CSV (grid)");
  kernel->add_option("--N", grid, "grid size for fredholm mode");
  kernel->add_option("--n", n_list, "comma-separated n list for trend mode");
  kernel->add_option("--refine", refine, "refined grid for the determinant");
  kernel->add_option("--workers", workers, "worker count for the exact side");
  kernel->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  kernel->add_option("--out", out_path, "output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage problems are input errors
  }

  if (scale->parsed()) {
    const PositiveBlockMatrix b = load_positive_seed(input);
    const ScalingSolution sol = sinkhorn_scale(b, SinkhornOptions{tol, max_iter});
    std::ostringstream js;
    js << "{\"m\":" << b.size() << ",\"v\":" << vector_json(sol.v)
       << ",\"w\":" << vector_json(sol.w) << ",\"t\":" << matrix_json(sol.t)
       << ",\"residual\":" << fmt_g17(sol.residual) << ",\"iterations\":" << sol.iterations
       << '}';
    emit(js.str(), out_path);
    return 0;
  }

  if (perm->parsed()) {
    std::ostringstream js;
    if (method == "pinsky") {
      const DenseMatrix b = load_seed_matrix(input);
      RatioOptions opts;
      opts.table_budget = budget;
      opts.workers = workers;
      opts.allow_zero = allow_zero;
      const BlockPermanentResult r = block_permanent_ratio(b, n, opts);
      js << "{\"method\":\"pinsky\",\"n\":" << n << ",\"log_ratio\":" << fmt_g17(r.log_ratio)
         << ",\"table_count\":" << r.table_count
         << ",\"argmax_table\":" << table_json(r.argmax_table) << '}';
    } else {
      const PositiveBlockMatrix b = load_positive_seed(input);
      const BlockExpandedMatrix a = build_block_matrix(b, n);
      const LogNonneg p = method == "naive"
                              ? permanent_naive(a.entries)
                              : permanent_ryser(a.entries, RyserOptions{max_dim, workers});
      const double log_ratio =
          p.log() - log_factorial(static_cast<std::uint64_t>(a.m) * a.n);
      js << "{\"method\":\"" << method << "\",\"n\":" << n
         << ",\"log_permanent\":" << fmt_g17(p.log()) << ",\"log_ratio\":" << fmt_g17(log_ratio)
         << '}';
    }
    emit(js.str(), out_path);
    return 0;
  }

  if (predict->parsed()) {
    const PositiveBlockMatrix b = load_positive_seed(input);
    const ScalingSolution sol = sinkhorn_scale(b);
    std::ostringstream js;
    try {
      const AsymptoticPrediction p = predict_ratio(b, n, sol);
      js << "{\"n\":" << n << ",\"log_leading\":" << fmt_g17(p.log_leading)
         << ",\"fluct_det\":" << fmt_g17(p.fluct_det)
         << ",\"log_predicted_ratio\":" << fmt_g17(p.log_predicted_ratio)
         << ",\"degenerate\":false}";
    } catch (const DegenerateSpectrumError& e) {
      js << "{\"n\":" << n << ",\"fluct_det\":" << fmt_g17(e.determinant)
         << ",\"degenerate\":true}";
    }
    emit(js.str(), out_path);
    return 0;
  }

  if (sweep->parsed()) {
    const PositiveBlockMatrix b = load_positive_seed(input);
    const std::vector<std::size_t> ns = parse_n_list(n_list);
    RatioOptions opts;
    opts.table_budget = budget;
    opts.workers = workers;
    const SweepReport report = verify_sweep(b, ns, opts);
    emit(format == "csv" ? report.to_csv() : report.to_json(), out_path);
    return 0;
  }

  if (fluct->parsed()) {
    const PositiveBlockMatrix b = load_positive_seed(input);
    const ScalingSolution sol = sinkhorn_scale(b);
    const DeterminantIdentityReport report = verify_determinant_identities(sol.t, verify_tol);
    const SpectrumPairingReport spectrum = spectrum_pairing_check(sol.t);
    const bool pass = report.pass && spectrum.pass;
    std::ostringstream js;
    js << "{\"identities\":" << report.to_json()
       << ",\"spectrum_pairing\":{\"max_gap\":" << fmt_g17(spectrum.max_gap)
       << ",\"pass\":" << (spectrum.pass ? "true" : "false")
       << "},\"pass\":" << (pass ? "true" : "false") << '}';
    emit(js.str(), out_path);
    return verify && !pass ? 2 : 0;
  }

  if (kernel->parsed()) {
    const KernelSpec spec = kargs.make();
    if (kernel_mode == "fredholm") {
      const BridgeSolution sol = bridge_potentials(spec, grid);
      std::ostringstream js;
      try {
        const double det = fredholm_determinant(sol);
        js << "{\"family\":\"" << kargs.family << "\",\"N\":" << grid
           << ",\"lambda_rate\":" << fmt_g17(sol.lambda_rate)
           << ",\"fredholm_det\":" << fmt_g17(det)
           << ",\"residual\":" << fmt_g17(sol.residual)
           << ",\"iterations\":" << sol.iterations << ",\"degenerate\":false}";
      } catch (const DegenerateSpectrumError& e) {
        js << "{\"family\":\"" << kargs.family << "\",\"N\":" << grid
           << ",\"lambda_rate\":" << fmt_g17(sol.lambda_rate)
           << ",\"fredholm_det\":" << fmt_g17(e.determinant) << ",\"degenerate\":true}";
      }
      emit(js.str(), out_path);
      return 0;
    }
    if (n_list.empty()) throw InputError("kernel trend needs --n");
    const std::vector<std::size_t> ns = parse_n_list(n_list);
    TrendOptions opts;
    opts.refined_grid = refine;
    opts.ryser_workers = workers;
    const KernelTrendReport report = asymptotic_trend(spec, ns, opts);
    emit(format == "csv" ? report.to_csv() : report.to_json(), out_path);
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
