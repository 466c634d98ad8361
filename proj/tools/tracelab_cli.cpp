// Command-line front end over the tracelab C API.
//
//   tracelab verify --check problem2 --p 2 T.json S.json
//   tracelab sweep  --config sweep.json --out sweep.csv
//   tracelab search --check problem2 --p 2 --n 2 --restarts 20
//   tracelab demo
//
// Exit code: 0 when every check held, 1 when a check failed, 2 on usage or runtime errors.

#include <cctype>
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "tracelab/tracelab.h"

namespace {

constexpr int kExitHeld = 0;
constexpr int kExitFailed = 1;
constexpr int kExitError = 2;

struct MatrixDeleter {
  void operator()(tl_matrix* m) const { tl_matrix_free(m); }
};
using MatrixPtr = std::unique_ptr<tl_matrix, MatrixDeleter>;

class ApiError : public std::runtime_error {
 public:
  explicit ApiError(tl_status status)
      : std::runtime_error(std::string(tl_status_name(status)) + ": " + tl_last_error()) {}
};

void check(tl_status status) {
  if (status != TL_OK) throw ApiError(status);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v + 0.0);
  return buf;
}

MatrixPtr make(std::size_t n, const std::vector<double>& interleaved, tl_matrix_kind kind) {
  tl_matrix* m = nullptr;
  check(tl_matrix_create(n, interleaved.data(), kind, &m));
  return MatrixPtr(m);
}

MatrixPtr load(const std::string& path) {
  tl_matrix* m = nullptr;
  check(tl_matrix_load(path.c_str(), &m));
  return MatrixPtr(m);
}

std::size_t effective_threads(std::size_t requested) {
  // THREADS caps parallelism; output bytes never depend on it.
  if (const char* env = std::getenv("THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap > 0 && (requested == 0 || requested > static_cast<std::size_t>(cap))) {
      return static_cast<std::size_t>(cap);
    }
  }
  return requested;
}

// ---- verify -------------------------------------------------------------------

struct VerifyOptions {
  std::string check = "problem2";
  std::vector<std::string> files;
  std::size_t n = 3;
  double p = 2.0;
  std::vector<double> nu{0.5};
  std::uint64_t seed = 1;
  double tol = 1e-9;
  std::string generator = "GinibrePsd";
};

int run_verify(const VerifyOptions& o) {
  MatrixPtr a, b;
  if (o.files.size() == 2) {
    a = load(o.files[0]);
    b = load(o.files[1]);
  } else if (o.files.empty()) {
    tl_matrix* ra = nullptr;
    tl_matrix* rb = nullptr;
    check(tl_generate_pair(o.generator.c_str(), o.n, o.seed, &ra, &rb));
    a.reset(ra);
    b.reset(rb);
  } else {
    std::cerr << "verify takes either two matrix files or none\n";
    return kExitError;
  }

  std::string key;
  for (char c : o.check) {
    if (c != '_') key += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  const bool uses_nu = key == "gtchain";
  const bool uses_p = key == "problem2" || key == "conjecture1";
  const double param = uses_nu ? o.nu.front() : o.p;
  const std::size_t cap = 8 * tl_matrix_dim(a.get()) + 16 + o.nu.size();
  std::vector<double> lhs(cap), rhs(cap);
  tl_check_result r{};
  check(tl_run_check(o.check.c_str(), a.get(), b.get(), param, o.nu.data(), o.nu.size(), o.tol, &r,
                     lhs.data(), lhs.size(), rhs.data(), rhs.size()));
  lhs.resize(r.lhs_count);
  rhs.resize(r.rhs_count);

  const auto join = [](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + fmt(v[i]);
    return s;
  };
  std::cout << "check     " << o.check << "\n"
            << "n         " << tl_matrix_dim(a.get()) << "\n"
            << "param     " << (uses_nu || uses_p ? fmt(param) : std::string()) << "\n"
            << "lhs       " << join(lhs) << "\n"
            << "rhs       " << join(rhs) << "\n"
            << "min_slack " << fmt(r.min_slack) << "\n"
            << "holds     " << (r.holds ? "true" : "false") << "\n";
  return r.holds ? kExitHeld : kExitFailed;
}

// ---- sweep --------------------------------------------------------------------

struct SweepOptions {
  std::string config_path;
  std::string check = "problem2";
  std::vector<std::size_t> dims{2, 3, 4};
  std::vector<double> p{0.5, 2.0};
  std::vector<double> nu{1.0, 0.5};
  std::size_t trials = 10;
  std::uint64_t seed = 0;
  double tol = 1e-9;
  std::string generator = "GinibrePsd";
  std::size_t rank = 0;
  std::size_t threads = 1;
  bool timing = false;
  std::string out = "sweep.csv";
};

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int run_sweep_cmd(const SweepOptions& o) {
  nlohmann::json cfg;
  if (!o.config_path.empty()) {
    cfg = nlohmann::json::parse(read_text(o.config_path));
  } else {
    cfg["check"] = o.check;
    cfg["dims"] = o.dims;
    cfg["p_grid"] = o.p;
    cfg["nu_grid"] = o.nu;
    cfg["trials_per_cell"] = o.trials;
    cfg["seed"] = o.seed;
    cfg["tol"] = o.tol;
    cfg["generator"] = {{"kind", o.generator}, {"rank", o.rank}, {"scale", 1.0}};
    cfg["record_timing"] = o.timing;
    cfg["threads"] = o.threads;
  }
  cfg["threads"] = effective_threads(cfg.value("threads", std::size_t{1}));

  tl_sweep_summary s{};
  check(tl_sweep_run(cfg.dump().c_str(), o.out.c_str(), &s));
  std::cout << "total " << s.total << " held " << s.held << " failed " << s.failed
            << " min_slack " << fmt(s.min_slack) << "\n"
            << "wrote " << o.out << "\n";
  return s.failed == 0 ? kExitHeld : kExitFailed;
}

// ---- search -------------------------------------------------------------------

struct SearchOptions {
  std::string config_path;
  std::string target = "problem2";
  double p = 2.0;
  double nu = 0.5;
  std::size_t step = 0;
  std::size_t n = 2;
  std::size_t restarts = 20;
  std::size_t evals = 2000;
  double radius = 0.5;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  std::string out = "witness";
};

int run_search(const SearchOptions& o) {
  tl_search_config c;
  tl_search_config_default(&c);
  std::string target = o.target;
  if (!o.config_path.empty()) {
    const auto doc = nlohmann::json::parse(read_text(o.config_path));
    target = doc.at("target").get<std::string>();
    const bool nu_target = target == "gt_chain" || target == "gt_chain_step";
    c.param = nu_target ? doc.at("nu").get<double>() : doc.at("p").get<double>();
    c.step = doc.value("step", std::size_t{0});
    c.n = doc.at("n").get<std::size_t>();
    c.restarts = doc.value("restarts", c.restarts);
    c.max_evals_per_restart = doc.value("max_evals_per_restart", c.max_evals_per_restart);
    c.simplex_init_radius = doc.value("simplex_init_radius", c.simplex_init_radius);
    c.seed = doc.value("seed", std::uint64_t{0});
    c.convergence_eps = doc.value("convergence_eps", c.convergence_eps);
    c.threads = doc.value("threads", std::size_t{1});
  } else {
    const bool nu_target = target == "gt_chain" || target == "gt_chain_step";
    c.param = nu_target ? o.nu : o.p;
    c.step = o.step;
    c.n = o.n;
    c.restarts = o.restarts;
    c.max_evals_per_restart = o.evals;
    c.simplex_init_radius = o.radius;
    c.seed = o.seed;
    c.threads = o.threads;
  }
  c.target = target.c_str();
  c.threads = effective_threads(c.threads);

  tl_search_result r{};
  std::vector<double> bests(c.restarts);
  tl_matrix* wt = nullptr;
  tl_matrix* ws = nullptr;
  check(tl_search_run(&c, &r, bests.data(), &wt, &ws));
  MatrixPtr witness_t(wt), witness_s(ws);

  std::cout << "target     " << target << " (param " << fmt(c.param) << ")\n"
            << "n          " << c.n << "\n"
            << "best_slack " << fmt(r.best_slack) << "\n"
            << "evals      " << r.eval_count << "\n"
            << "violated   " << (r.violated ? "true" : "false") << "\n";
  if (r.violated) {
    const std::string tp = o.out + "_T.json";
    const std::string sp = o.out + "_S.json";
    check(tl_matrix_save(witness_t.get(), tp.c_str()));
    check(tl_matrix_save(witness_s.get(), sp.c_str()));
    std::cout << "witness    " << tp << " " << sp << "\n";
    return kExitFailed;
  }
  return kExitHeld;
}

// ---- demo ---------------------------------------------------------------------

int run_demo() {
  // T = diag(1, 2), S = ½[[1, 1], [1, 1]]
  const MatrixPtr t = make(2, {1, 0, 0, 0, 0, 0, 2, 0}, TL_KIND_PSD);
  const MatrixPtr s = make(2, {0.5, 0, 0.5, 0, 0.5, 0, 0.5, 0}, TL_KIND_PSD);
  bool ok = true;

  std::cout << "T = diag(1, 2),  S = 1/2 [[1, 1], [1, 1]]\n"
            << "T^2 + ST^2S = [[2.25, 1.25], [1.25, 5.25]]\n"
            << "T^2 + TS^2T = [[1.5, 1], [1, 6]]\n\n";

  tl_majorization_summary maj{};
  double ls[2], rs[2];
  check(tl_theorem1_majorization(t.get(), s.get(), 1e-9, &maj, ls, rs));
  std::cout << "spectrum(T^2+ST^2S) = (" << short_fmt(ls[0]) << ", " << short_fmt(ls[1] - ls[0]) << ")\n"
            << "spectrum(T^2+TS^2T) = (" << short_fmt(rs[0]) << ", " << short_fmt(rs[1] - rs[0]) << ")\n"
            << "majorization: k=1 slack " << short_fmt(rs[0] - ls[0]) << ", totals " << short_fmt(ls[1])
            << " / " << short_fmt(rs[1]) << ", holds " << (maj.holds ? "yes" : "no") << "\n\n";
  ok = ok && maj.holds;

  for (double p : {0.5, 1.0, 2.0, 3.0}) {
    tl_side_pair sp{};
    check(tl_problem2_sides(t.get(), s.get(), p, 1e-9, &sp));
    std::cout << "p = " << short_fmt(p) << ": Tr[(T^2+ST^2S)^p] = " << short_fmt(sp.lhs)
              << ", Tr[(T^2+TS^2T)^p] = " << short_fmt(sp.rhs) << ", slack " << short_fmt(sp.slack)
              << (sp.holds ? "  ok" : "  FAILED") << "\n";
    ok = ok && sp.holds;
  }

  tl_p2_report p2{};
  check(tl_p2_elementary(t.get(), s.get(), 1e-9, &p2));
  std::cout << "\np = 2 by direct products: (" << short_fmt(p2.product_route.lhs) << ", "
            << short_fmt(p2.product_route.rhs) << "), spectral route (" << short_fmt(p2.spectral_lhs)
            << ", " << short_fmt(p2.spectral_rhs) << ")\n";
  ok = ok && p2.holds;

  tl_proof_chain_report chain{};
  check(tl_proof_chain(t.get(), s.get(), 1, 1e-9, &chain));
  std::cout << "\nfactorization chain, k = 1:\n"
            << "  2 kf(T^2+TS^2T)                         = " << short_fmt(chain.chain.terms[0]) << "\n"
            << "  kf((T+iTS)(T-iST)) + kf((T-iTS)(T+iST)) = " << short_fmt(chain.chain.terms[1]) << "\n"
            << "  kf((T-iST)(T+iTS)) + kf((T+iST)(T-iTS)) = " << short_fmt(chain.chain.terms[2]) << "\n"
            << "  kf(X+Y) + kf(X-Y)                       = " << short_fmt(chain.chain.terms[3]) << "\n"
            << "  2 kf(X)                                 = " << short_fmt(chain.chain.terms[4]) << "\n"
            << "  final slack " << short_fmt(chain.final_slack) << "\n";
  ok = ok && chain.holds;

  const MatrixPtr x = make(2, {1, 0, 0, 0, 0, 0, 0, 0}, TL_KIND_PSD);
  tl_conjecture1_report c1{};
  check(tl_conjecture1_sides(x.get(), s.get(), 3.0, 1e-9, &c1));
  std::cout << "\nX = diag(1, 0), Y = S, p = 3:\n"
            << "  Tr[(I+X+Y+Y^1/2XY^1/2)^p] = " << short_fmt(c1.sides.lhs)
            << ", Tr[(I+X+Y+XY)^p] = " << short_fmt(c1.sides.rhs) << "\n";
  ok = ok && c1.holds;

  tl_gt_chain_report gt{};
  check(tl_gt_chain(x.get(), s.get(), 0.5, 1e-9, &gt));
  std::cout << "  nu = 1/2 chain: " << short_fmt(gt.chain.terms[0]) << " <= " << short_fmt(gt.chain.terms[1])
            << " <= " << short_fmt(gt.chain.terms[2]) << " <= " << short_fmt(gt.chain.terms[3]) << "\n";
  ok = ok && gt.holds;

  std::cout << "\n" << (ok ? "all checks held" : "a check FAILED") << "\n";
  return ok ? kExitHeld : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks of spectral majorization and trace inequalities for PSD pairs"};
  app.require_subcommand(1);

  VerifyOptions vo;
  auto* verify = app.add_subcommand("verify", "Run one check on two matrix files or one seeded pair");
  verify->add_option("--check", vo.check, "problem2, conjecture1, theorem1_majorization, proof_chain, "
                                          "gt_chain, ky_fan, symmetric_ky_fan, p2_elementary, gt_limit_probe");
  verify->add_option("files", vo.files, "Two matrix JSON files (T S, or X Y)");
  verify->add_option("--n", vo.n, "Dimension of the seeded pair");
  verify->add_option("--p", vo.p, "Exponent p");
  verify->add_option("--nu", vo.nu, "nu (gt_chain uses the first; gt_limit_probe the whole grid)");
  verify->add_option("--seed", vo.seed, "Seed of the generated pair");
  verify->add_option("--tol", vo.tol, "Scale-relative tolerance");
  verify->add_option("--generator", vo.generator, "Generator kind for the seeded pair");

  SweepOptions so;
  auto* sweep = app.add_subcommand("sweep", "Run a seeded parameter sweep and write CSV");
  sweep->add_option("--config", so.config_path, "Sweep configuration JSON");
  sweep->add_option("--check", so.check, "Check name");
  sweep->add_option("--n", so.dims, "Dimensions");
  sweep->add_option("--p", so.p, "Exponent grid");
  sweep->add_option("--nu", so.nu, "nu grid");
  sweep->add_option("--trials", so.trials, "Trials per cell");
  sweep->add_option("--seed", so.seed, "Base seed");
  sweep->add_option("--tol", so.tol, "Scale-relative tolerance");
  sweep->add_option("--generator", so.generator, "Generator kind");
  sweep->add_option("--rank", so.rank, "Rank for RankDeficientPsd");
  sweep->add_option("--threads", so.threads, "Worker threads (0 = all cores)");
  sweep->add_flag("--timing", so.timing, "Record wall time per trial (output no longer byte-stable)");
  sweep->add_option("--out", so.out, "CSV output path");

  SearchOptions sr;
  auto* search = app.add_subcommand("search", "Adversarial Nelder-Mead search for a negative slack");
  search->add_option("--config", sr.config_path, "Search configuration JSON");
  search->add_option("--check", sr.target, "problem2, conjecture1, gt_chain, gt_chain_step, problem2_unasserted");
  search->add_option("--p", sr.p, "Exponent p");
  search->add_option("--nu", sr.nu, "nu");
  search->add_option("--step", sr.step, "Chain step for gt_chain_step (0, 1, 2)");
  search->add_option("--n", sr.n, "Dimension");
  search->add_option("--restarts", sr.restarts, "Restarts");
  search->add_option("--evals", sr.evals, "Evaluations per restart");
  search->add_option("--radius", sr.radius, "Initial simplex radius");
  search->add_option("--seed", sr.seed, "Seed");
  search->add_option("--threads", sr.threads, "Worker threads (0 = all cores)");
  search->add_option("--out", sr.out, "Witness file prefix, written on violation");

  app.add_subcommand("demo", "Print the worked 2x2 example with intermediate values");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*verify) return run_verify(vo);
    if (*sweep) return run_sweep_cmd(so);
    if (*search) return run_search(sr);
    return run_demo();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}
