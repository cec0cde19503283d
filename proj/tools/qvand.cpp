// qvand: structured q-power Vandermonde toolkit.
//
// Subcommands:
//   factor  print the structured factorization (pivot diagonal, optionally L)
//   solve   solve V x = b through the factored form, O(n^2)
//   verify  run the identity suites and report pass/fail per suite
//   bench   time structured solve vs the dense oracle over a ladder of n
//
// Exit codes: 0 ok, 1 usage/parse/io errors, 2 degenerate or zero q,
// 3 verify suite failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qvand/factor.hpp"
#include "qvand/kernels.hpp"
#include "qvand/solve.hpp"
#include "qvand/verify.hpp"

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

namespace {

struct RunConfig {
  std::string q_text;
  int n = 0;
  std::string backend;  // "", "exact" or "complex"
  double eps = -1.0;    // <0: backend default
  bool dft = false;
  bool check = false;
  int m_band = 0;  // 0: default min(n, 8)
  std::uint64_t seed = 1;
  std::string in_path;
  std::string out_path;
  std::string ladder = "128,256,512,1024,2048";
};

double elapsed(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

int dense_cap_from_env() {
  const char* env = std::getenv("QVAND_DENSE_CAP");
  if (!env || !*env) return qvand::kDefaultDenseCap;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (!end || *end != '\0' || v < 1)
    throw qvand::Error("QVAND_DENSE_CAP must be a positive integer");
  return static_cast<int>(v);
}

// "exact" unless told otherwise; bracketed q text means complex.
std::string pick_backend(const RunConfig& cfg) {
  if (!cfg.backend.empty()) return cfg.backend;
  if (cfg.dft) return "complex";
  if (!cfg.q_text.empty() && cfg.q_text.front() == '[') return "complex";
  return "exact";
}

template <class T>
T resolve_q(const RunConfig& cfg) {
  if (cfg.dft) {
    if constexpr (qvand::scalar_traits<T>::is_exact) {
      throw qvand::Error("--dft requires the complex backend");
    } else {
      const double ang = -2.0 * M_PI / cfg.n;
      return qvand::Complex(std::cos(ang), std::sin(ang));
    }
  }
  return qvand::parse_scalar<T>(cfg.q_text);
}

template <class T>
double resolve_eps(const RunConfig& cfg) {
  return cfg.eps >= 0.0 ? cfg.eps : qvand::default_guard_eps<T>();
}

std::ostream& open_out(const RunConfig& cfg, std::ofstream& file) {
  if (cfg.out_path.empty() || cfg.out_path == "-") return std::cout;
  file.open(cfg.out_path);
  if (!file) throw qvand::Error("cannot open output file: " + cfg.out_path);
  return file;
}

std::vector<std::string> read_vector_file(const std::string& path) {
  json doc;
  try {
    if (path == "-") {
      doc = json::parse(std::cin);
    } else {
      std::ifstream in(path);
      if (!in) throw qvand::Error("cannot open input file: " + path);
      doc = json::parse(in);
    }
  } catch (const json::exception& e) {
    throw qvand::Error(std::string("bad input vector JSON: ") + e.what());
  }
  if (!doc.is_array()) throw qvand::Error("input vector must be a JSON array of scalars");
  std::vector<std::string> out;
  for (const auto& el : doc) {
    if (!el.is_string())
      throw qvand::Error("input vector entries must be scalar strings");
    out.push_back(el.get<std::string>());
  }
  return out;
}

// ---- factor ----

template <class T>
int cmd_factor(const RunConfig& cfg) {
  const T q = resolve_q<T>(cfg);
  auto f = qvand::factorize(q, cfg.n, resolve_eps<T>(cfg));

  json lrows;
  json res;
  if (cfg.check) {
    const int cap = dense_cap_from_env();
    if (cfg.n > cap)
      throw qvand::Error("--check densifies and needs n <= " + std::to_string(cap) +
                         " (raise QVAND_DENSE_CAP to override)");
    auto l = f.dense_L();
    lrows = json::array();
    for (int i = 0; i < cfg.n; ++i) {
      json row = json::array();
      for (int j = 0; j < cfg.n; ++j) row.push_back(qvand::format_scalar(l(i, j)));
      lrows.push_back(std::move(row));
    }
    auto r = qvand::residual(f, cap);
    if (r.exact) {
      res = r.exact_zero ? json("exact-zero") : json(r.max_abs);
    } else {
      res = r.relative_fro;
    }
  }
  json d = json::array();
  for (int i = 0; i < cfg.n; ++i) d.push_back(qvand::format_scalar(f.d_entry(i)));

  json out;
  out["q"] = qvand::format_scalar(q);
  out["n"] = cfg.n;
  if (cfg.check) out["L"] = std::move(lrows);
  out["D"] = std::move(d);
  out["backend"] = qvand::scalar_traits<T>::backend_name;
  if (cfg.check) out["residual"] = std::move(res);

  std::ofstream file;
  open_out(cfg, file) << out.dump(2) << "\n";
  return 0;
}

// ---- solve ----

template <class T>
int cmd_solve(const RunConfig& cfg) {
  const T q = resolve_q<T>(cfg);
  // factorize before touching the input so guard failures win over IO errors
  auto f = qvand::factorize(q, cfg.n, resolve_eps<T>(cfg));

  auto texts = read_vector_file(cfg.in_path);
  if (static_cast<int>(texts.size()) != cfg.n)
    throw qvand::DimensionMismatch("input vector has " + std::to_string(texts.size()) +
                                   " entries, expected n = " + std::to_string(cfg.n));
  std::vector<T> b;
  b.reserve(texts.size());
  for (const auto& s : texts) b.push_back(qvand::parse_scalar<T>(s));

  auto rep = qvand::solve(f, b);

  json out;
  out["q"] = qvand::format_scalar(q);
  out["n"] = cfg.n;
  out["backend"] = qvand::scalar_traits<T>::backend_name;
  json x = json::array();
  for (const auto& v : rep.x) x.push_back(qvand::format_scalar(v));
  out["x"] = std::move(x);
  if (rep.residual_norm) out["residual_norm"] = *rep.residual_norm;
  out["cost_counters"] = {
      {"toeplitz_matvecs", rep.counters.toeplitz_matvecs},
      {"diagonal_scalings", rep.counters.diagonal_scalings},
      {"diagonal_inversion_applies", rep.counters.diagonal_inversion_applies},
      {"back_substitutions", rep.counters.back_substitutions},
  };

  std::ofstream file;
  open_out(cfg, file) << out.dump(2) << "\n";
  return 0;
}

// ---- verify ----

template <class T>
int cmd_verify(const RunConfig& cfg) {
  const T q = resolve_q<T>(cfg);
  const int m_max = cfg.m_band > 0 ? cfg.m_band : std::min(cfg.n, 8);
  const int cap = dense_cap_from_env();

  std::ofstream file;
  std::ostream& os = open_out(cfg, file);
  os << "# verify q=" << (cfg.dft ? std::string("dft") : cfg.q_text) << " n=" << cfg.n
     << " backend=" << qvand::scalar_traits<T>::backend_name << " eps="
     << fmt_double(resolve_eps<T>(cfg)) << " m_max=" << m_max << " seed=" << cfg.seed
     << "\n";

  auto suites =
      qvand::run_verify_suites(q, cfg.n, resolve_eps<T>(cfg), m_max, cfg.seed, cap);
  int passed = 0;
  for (const auto& s : suites) {
    os << s.name << ": " << (s.pass ? "pass" : "FAIL") << ", deviation "
       << fmt_double(s.worst_deviation) << "\n";
    if (s.pass) ++passed;
  }
  os << "result: " << passed << "/" << suites.size() << " suites passed\n";
  return passed == static_cast<int>(suites.size()) ? 0 : 3;
}

// ---- bench ----

std::vector<int> parse_ladder(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    char* end = nullptr;
    const long v = std::strtol(tok.c_str(), &end, 10);
    if (!end || *end != '\0' || v < 1) throw qvand::Error("bad ladder entry: " + tok);
    out.push_back(static_cast<int>(v));
  }
  if (out.empty()) throw qvand::Error("empty ladder");
  return out;
}

template <class F>
double time_median(F&& fn, int reps) {
  std::vector<double> times;
  times.reserve(static_cast<std::size_t>(reps));
  for (int r = 0; r < reps; ++r) {
    // batch tiny workloads up to ~20ms so the clock resolution cannot bite
    auto t0 = Clock::now();
    fn();
    auto t1 = Clock::now();
    double dt = elapsed(t0, t1);
    if (dt < 0.02) {
      const int k = std::max(1, static_cast<int>(std::ceil(0.02 / std::max(dt, 1e-7))));
      t0 = Clock::now();
      for (int i = 0; i < k; ++i) fn();
      t1 = Clock::now();
      dt = elapsed(t0, t1) / k;
    }
    times.push_back(dt);
  }
  std::sort(times.begin(), times.end());
  return times[times.size() / 2];
}

int cmd_bench(const RunConfig& cfg) {
  if (pick_backend(cfg) != "complex")
    throw qvand::Error("bench requires complex backend (use --dft or a complex --q)");
  const auto ladder = parse_ladder(cfg.ladder);

  std::ofstream file;
  std::ostream& os = open_out(cfg, file);
  os << "# qvand-bench v1\n";
  os << "# seed=" << cfg.seed << " kernel=" << qvand::kernels::isa_name(qvand::kernels::active())
     << " reps=5\n";
  os << "n,structured_solve_seconds,dense_oracle_seconds,residual\n";

  for (int n : ladder) {
    RunConfig row_cfg = cfg;
    row_cfg.n = n;
    const qvand::Complex q = resolve_q<qvand::Complex>(row_cfg);
    auto f = qvand::factorize(q, n, resolve_eps<qvand::Complex>(cfg));

    std::mt19937_64 rng(cfg.seed + static_cast<std::uint64_t>(n));
    std::vector<qvand::Complex> b;
    b.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) b.push_back(qvand::random_complex(rng));

    auto rep = qvand::solve(f, b);
    const double structured =
        time_median([&] { qvand::solve(f, b); }, 5);

    auto v = qvand::build_vandermonde(q, n);
    const double dense = time_median([&] { qvand::dense_solve_oracle(v, b); }, 3);

    char line[160];
    std::snprintf(line, sizeof(line), "%d,%.6e,%.6e,%.6e\n", n, structured, dense,
                  rep.residual_norm.value_or(0.0));
    os << line;
  }
  return 0;
}

template <class T>
int dispatch(const std::string& sub, const RunConfig& cfg) {
  if (sub == "factor") return cmd_factor<T>(cfg);
  if (sub == "solve") return cmd_solve<T>(cfg);
  if (sub == "verify") return cmd_verify<T>(cfg);
  throw qvand::Error("unknown subcommand: " + sub);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"structured factorization toolkit for q-power Vandermonde matrices"};
  app.require_subcommand(1);

  RunConfig cfg;

  auto add_common = [&cfg](CLI::App* sub, bool need_n) {
    sub->add_option("--q", cfg.q_text,
                    "q as 'p', 'p/q', or '[re,im]' (use --q=-3/4 for negatives)");
    auto* n_opt = sub->add_option("--n", cfg.n, "matrix dimension")->check(CLI::PositiveNumber);
    if (need_n) n_opt->required();
    sub->add_option("--backend", cfg.backend, "scalar backend")
        ->check(CLI::IsMember({"exact", "complex"}));
    sub->add_option("--eps", cfg.eps, "degeneracy guard tolerance (complex backend)")
        ->check(CLI::NonNegativeNumber);
    sub->add_flag("--dft", cfg.dft, "use the n-th DFT root e^{-2 pi i/n} as q");
    sub->add_option("--out", cfg.out_path, "output file (default stdout)");
  };

  auto* factor = app.add_subcommand("factor", "print the structured factorization");
  add_common(factor, true);
  factor->add_flag("--check", cfg.check, "densify, verify the residual, and include L");

  auto* solve = app.add_subcommand("solve", "solve V x = b through the factorization");
  add_common(solve, true);
  solve->add_option("--in", cfg.in_path, "rhs vector file (JSON array of scalars, '-' = stdin)")
      ->required();

  auto* verify = app.add_subcommand("verify", "run the identity suites");
  add_common(verify, true);
  verify->add_option("--m", cfg.m_band, "max band parameter (default min(n,8))")
      ->check(CLI::PositiveNumber);
  verify->add_option("--seed", cfg.seed, "seed for the randomized roundtrip suite");

  auto* bench = app.add_subcommand("bench", "time structured vs dense solves");
  add_common(bench, false);
  bench->add_option("--ladder", cfg.ladder, "comma-separated dimensions");
  bench->add_option("--seed", cfg.seed, "seed for benchmark vectors");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  const std::string sub = app.get_subcommands().front()->get_name();

  try {
    if (sub == "bench") {
      if (!cfg.dft && cfg.q_text.empty()) cfg.dft = true;  // bench defaults to DFT roots
      return cmd_bench(cfg);
    }
    if (cfg.dft && !cfg.q_text.empty())
      throw qvand::Error("--dft and --q are mutually exclusive");
    if (!cfg.dft && cfg.q_text.empty()) throw qvand::Error("missing --q (or --dft)");

    const std::string backend = pick_backend(cfg);
    if (backend == "exact") return dispatch<qvand::Rational>(sub, cfg);
    return dispatch<qvand::Complex>(sub, cfg);
  } catch (const qvand::DegenerateQ& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const qvand::ZeroQ& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
