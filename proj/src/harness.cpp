#include "tracelab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "tracelab/majorization.hpp"
#include "tracelab/trace_inequalities.hpp"

namespace tracelab {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    parse_fail(std::string("malformed JSON: ") + e.what());
  }
}

template <typename T>
T field(const json& obj, const char* key) {
  if (!obj.contains(key)) parse_fail(std::string("missing field '") + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    parse_fail(std::string("field '") + key + "': " + e.what());
  }
}

template <typename T>
T field_or(const json& obj, const char* key, T fallback) {
  return obj.contains(key) ? field<T>(obj, key) : fallback;
}

}  // namespace

// ---- matrix files -------------------------------------------------------------

LoadedMatrix parse_matrix_json(const std::string& text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) parse_fail("matrix file must hold a JSON object");
  const auto n = field<std::int64_t>(doc, "n");
  if (n < 1 || n > static_cast<std::int64_t>(kMaxDimension)) parse_fail("n must lie in [1, 64]");
  const auto kind_name = field<std::string>(doc, "kind");
  MatrixKind kind;
  if (kind_name == "psd") {
    kind = MatrixKind::Psd;
  } else if (kind_name == "hermitian") {
    kind = MatrixKind::Hermitian;
  } else {
    parse_fail("kind must be \"psd\" or \"hermitian\", got \"" + kind_name + "\"");
  }
  if (!doc.contains("entries") || !doc["entries"].is_array()) parse_fail("missing array field 'entries'");
  const json& rows = doc["entries"];
  const auto un = static_cast<std::size_t>(n);
  if (rows.size() != un) parse_fail("entries must have n rows");
  std::vector<Complex> entries;
  entries.reserve(un * un);
  for (std::size_t i = 0; i < un; ++i) {
    if (!rows[i].is_array() || rows[i].size() != un) {
      parse_fail("row " + std::to_string(i) + " must have n entries");
    }
    for (std::size_t j = 0; j < un; ++j) {
      const json& z = rows[i][j];
      if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
        parse_fail("entry (" + std::to_string(i) + "," + std::to_string(j) + ") must be [re, im]");
      }
      const double re = z[0].get<double>();
      const double im = z[1].get<double>();
      if (!std::isfinite(re) || !std::isfinite(im)) {
        parse_fail("entry (" + std::to_string(i) + "," + std::to_string(j) + ") is not finite");
      }
      entries.emplace_back(re, im);
    }
  }
  HermitianMatrix h(DenseMatrix(un, std::move(entries)));
  LoadedMatrix loaded{kind, h, std::nullopt};
  if (kind == MatrixKind::Psd) loaded.psd.emplace(h);
  return loaded;
}

LoadedMatrix parse_matrix_file(const std::filesystem::path& path) {
  return parse_matrix_json(read_file(path));
}

std::string matrix_to_json(const DenseMatrix& m, MatrixKind kind) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.n(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.n(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  json doc;
  doc["n"] = m.n();
  doc["kind"] = kind == MatrixKind::Psd ? "psd" : "hermitian";
  doc["entries"] = std::move(rows);
  return doc.dump() + "\n";
}

void write_matrix_file(const std::filesystem::path& path, const DenseMatrix& m, MatrixKind kind) {
  write_file(path, matrix_to_json(m, kind));
}

void dump_witnesses(const SearchResult& result, const std::string& prefix) {
  write_matrix_file(prefix + "_T.json", result.witness_t.dense(), MatrixKind::Psd);
  write_matrix_file(prefix + "_S.json", result.witness_s.dense(), MatrixKind::Psd);
}

// ---- checks -----------------------------------------------------------------------

const char* check_kind_name(CheckKind kind) noexcept {
  switch (kind) {
    case CheckKind::Problem2: return "problem2";
    case CheckKind::Conjecture1: return "conjecture1";
    case CheckKind::Theorem1Majorization: return "theorem1_majorization";
    case CheckKind::ProofChain: return "proof_chain";
    case CheckKind::GtChain: return "gt_chain";
    case CheckKind::KyFan: return "ky_fan";
    case CheckKind::SymmetricKyFan: return "symmetric_ky_fan";
    case CheckKind::P2Elementary: return "p2_elementary";
    case CheckKind::GtLimitProbe: return "gt_limit_probe";
  }
  return "?";
}

CheckKind parse_check_kind(const std::string& name) {
  static const std::pair<const char*, CheckKind> kAliases[] = {
      {"Problem2", CheckKind::Problem2},
      {"Conjecture1", CheckKind::Conjecture1},
      {"Theorem1Majorization", CheckKind::Theorem1Majorization},
      {"ProofChain", CheckKind::ProofChain},
      {"GtChain", CheckKind::GtChain},
      {"KyFan", CheckKind::KyFan},
      {"SymmetricKyFan", CheckKind::SymmetricKyFan},
      {"P2Elementary", CheckKind::P2Elementary},
      {"GtLimitProbe", CheckKind::GtLimitProbe},
  };
  for (const auto& [alias, kind] : kAliases) {
    if (name == alias || name == check_kind_name(kind)) return kind;
  }
  throw Error(ErrorCode::InvalidParameter, "unknown check '" + name + "'");
}

bool check_uses_p(CheckKind kind) noexcept {
  return kind == CheckKind::Problem2 || kind == CheckKind::Conjecture1;
}

bool check_uses_nu(CheckKind kind) noexcept { return kind == CheckKind::GtChain; }

bool check_needs_psd(CheckKind kind) noexcept {
  return kind != CheckKind::KyFan && kind != CheckKind::SymmetricKyFan;
}

bool judge(std::span<const double> lhs, std::span<const double> rhs, double min_slack, double tol) {
  double scale = 1.0;
  for (double v : lhs) scale = std::max(scale, std::abs(v));
  for (double v : rhs) scale = std::max(scale, std::abs(v));
  return min_slack >= -tol * scale;
}

CheckOutcome run_check(CheckKind kind, const HermitianMatrix& a, const HermitianMatrix& b,
                       double param, std::span<const double> nu_grid, double tol) {
  require_same_dimension(a.dense(), b.dense());
  CheckOutcome out;
  if (kind == CheckKind::KyFan || kind == CheckKind::SymmetricKyFan) {
    const KyFanReport r = kind == CheckKind::KyFan ? ky_fan_check(a, b, tol)
                                                   : symmetric_ky_fan_check(a, b, tol);
    out.lhs = r.lhs_sums;
    out.rhs = r.rhs_sums;
    out.min_slack = r.min_slack();
  } else {
    const PsdMatrix x(a);
    const PsdMatrix y(b);
    switch (kind) {
      case CheckKind::Problem2: {
        const SidePair sp = problem2_sides(x, y, param, tol);
        out.lhs = {sp.lhs};
        out.rhs = {sp.rhs};
        out.min_slack = sp.slack;
        break;
      }
      case CheckKind::Conjecture1: {
        const Conjecture1Report r = conjecture1_sides(x, y, param, tol);
        out.lhs = {r.sides.lhs};
        out.rhs = {r.sides.rhs};
        out.min_slack = std::min(r.sides.slack, -r.reformulation_residual);
        break;
      }
      case CheckKind::Theorem1Majorization: {
        const MajorizationVerdict v = theorem1_majorization(x, y, tol);
        out.lhs = v.k_sums_lhs;
        out.rhs = v.k_sums_rhs;
        out.min_slack = v.min_slack();
        break;
      }
      case CheckKind::ProofChain: {
        out.min_slack = 0.0;
        for (std::size_t k = 1; k <= x.n(); ++k) {
          const ProofChainReport r = proof_chain_spectra(x, y, k, tol);
          out.lhs.insert(out.lhs.end(), r.chain.terms.begin(), r.chain.terms.end());
          out.min_slack = std::min({out.min_slack, r.min_slack(), -r.similarity_residual});
        }
        break;
      }
      case CheckKind::GtChain: {
        const GtChainReport r = gt_chain(x, y, param, tol);
        out.lhs = r.chain.terms;
        out.min_slack = std::min(r.chain.min_slack(), r.end_to_end_slack);
        break;
      }
      case CheckKind::P2Elementary: {
        const P2ElementaryReport r = p2_elementary_check(x, y, tol);
        out.lhs = {r.product_route.lhs};
        out.rhs = {r.product_route.rhs};
        out.min_slack = std::min(r.product_route.slack, -r.route_residual);
        break;
      }
      case CheckKind::GtLimitProbe: {
        const LimitProbeReport r = classical_gt_limit_probe(x, y, nu_grid, tol);
        out.lhs.push_back(r.trace_exp_x);
        out.lhs.insert(out.lhs.end(), r.deviations.begin(), r.deviations.end());
        out.rhs = r.gt_end_to_end_slacks;
        out.rhs.push_back(r.classical_gt_slack);
        out.min_slack = r.min_slack();
        break;
      }
      default: break;
    }
  }
  out.holds = judge(out.lhs, out.rhs, out.min_slack, tol);
  return out;
}

// ---- sweeps ---------------------------------------------------------------------------

void SweepConfig::validate() const {
  if (dims.empty()) throw Error(ErrorCode::InvalidParameter, "dims must be non-empty");
  for (std::size_t n : dims) {
    if (n < 1 || n > kMaxDimension) throw Error(ErrorCode::InvalidParameter, "dims must lie in [1, 64]");
    if (generator.kind == GeneratorKind::RankDeficientPsd && generator.rank > n) {
      throw Error(ErrorCode::InvalidParameter, "generator rank exceeds a swept dimension");
    }
  }
  if (trials_per_cell < 1) throw Error(ErrorCode::InvalidParameter, "trials_per_cell must be >= 1");
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidParameter, "tol must be positive");
  if (check_uses_p(check)) {
    if (p_grid.empty()) throw Error(ErrorCode::InvalidParameter, "p_grid required for this check");
    for (double p : p_grid) {
      if (!(p > 0.0) || !std::isfinite(p)) throw Error(ErrorCode::InvalidExponent, "p_grid values must be > 0");
    }
  }
  if (check_uses_nu(check) || check == CheckKind::GtLimitProbe) {
    if (nu_grid.empty()) throw Error(ErrorCode::InvalidParameter, "nu_grid required for this check");
    for (double nu : nu_grid) {
      if (!(nu > 0.0 && nu <= 1.0)) throw Error(ErrorCode::InvalidParameter, "nu_grid values must lie in (0, 1]");
    }
  }
  switch (generator.kind) {
    case GeneratorKind::HaarUnitary:
      throw Error(ErrorCode::InvalidParameter, "HaarUnitary cannot generate check operands");
    case GeneratorKind::HermitianGue:
      if (check_needs_psd(check)) {
        throw Error(ErrorCode::InvalidParameter, "this check needs a PSD generator");
      }
      break;
    default: break;
  }
  if (!(generator.scale > 0.0)) throw Error(ErrorCode::InvalidParameter, "generator scale must be positive");
}

SweepConfig sweep_config_from_json(const std::string& text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) parse_fail("sweep config must be a JSON object");
  SweepConfig c;
  c.check = parse_check_kind(field<std::string>(doc, "check"));
  c.dims = field<std::vector<std::size_t>>(doc, "dims");
  c.p_grid = field_or<std::vector<double>>(doc, "p_grid", {});
  c.nu_grid = field_or<std::vector<double>>(doc, "nu_grid", {});
  c.trials_per_cell = field_or<std::size_t>(doc, "trials_per_cell", 1);
  c.seed = field_or<std::uint64_t>(doc, "seed", 0);
  c.tol = field_or<double>(doc, "tol", 1e-9);
  c.threads = field_or<std::size_t>(doc, "threads", 1);
  c.record_timing = field_or<bool>(doc, "record_timing", false);
  if (doc.contains("generator")) {
    const json& g = doc["generator"];
    if (!g.is_object()) parse_fail("generator must be an object");
    c.generator.kind = parse_generator_kind(field_or<std::string>(g, "kind", "GinibrePsd"));
    c.generator.rank = field_or<std::size_t>(g, "rank", 0);
    c.generator.scale = field_or<double>(g, "scale", 1.0);
  }
  c.validate();
  return c;
}

std::string sweep_config_to_json(const SweepConfig& c) {
  json doc;
  doc["check"] = check_kind_name(c.check);
  doc["dims"] = c.dims;
  doc["p_grid"] = c.p_grid;
  doc["nu_grid"] = c.nu_grid;
  doc["trials_per_cell"] = c.trials_per_cell;
  doc["generator"] = {{"kind", generator_kind_name(c.generator.kind)},
                      {"rank", c.generator.rank},
                      {"scale", c.generator.scale}};
  doc["seed"] = c.seed;
  doc["tol"] = c.tol;
  doc["threads"] = c.threads;
  doc["record_timing"] = c.record_timing;
  return doc.dump(2) + "\n";
}

std::uint64_t trial_seed(std::uint64_t seed, std::size_t cell, std::size_t trial) noexcept {
  return derive_seed(derive_seed(seed, cell), trial);
}

std::pair<HermitianMatrix, HermitianMatrix> generate_pair(const GeneratorSpec& tmpl, std::size_t n,
                                                          std::uint64_t seed) {
  GeneratorSpec spec = tmpl;
  spec.n = n;
  switch (tmpl.kind) {
    case GeneratorKind::CommutingPsdPair: {
      auto [a, b] = commuting_pair(n, seed);
      return {a.hermitian(), b.hermitian()};
    }
    case GeneratorKind::HermitianGue: {
      spec.seed = derive_seed(seed, 0);
      HermitianMatrix a = random_hermitian(spec);
      spec.seed = derive_seed(seed, 1);
      return {std::move(a), random_hermitian(spec)};
    }
    case GeneratorKind::HaarUnitary:
      throw Error(ErrorCode::InvalidParameter, "HaarUnitary cannot generate check operands");
    default: {
      spec.seed = derive_seed(seed, 0);
      HermitianMatrix a = random_psd(spec).hermitian();
      spec.seed = derive_seed(seed, 1);
      return {std::move(a), random_psd(spec).hermitian()};
    }
  }
}

std::vector<SweepRecord> sweep_records(const SweepConfig& config) {
  config.validate();
  struct Job {
    std::size_t cell;
    std::size_t n;
    std::optional<double> param;
    std::size_t trial;
  };
  std::vector<Job> jobs;
  for (std::size_t cell = 0; cell < config.dims.size(); ++cell) {
    std::vector<std::optional<double>> params;
    if (check_uses_p(config.check)) {
      params.assign(config.p_grid.begin(), config.p_grid.end());
    } else if (check_uses_nu(config.check)) {
      params.assign(config.nu_grid.begin(), config.nu_grid.end());
    } else {
      params.push_back(std::nullopt);
    }
    for (const auto& param : params)
      for (std::size_t t = 0; t < config.trials_per_cell; ++t)
        jobs.push_back({cell, config.dims[cell], param, t});
  }

  std::vector<SweepRecord> records(jobs.size());
  const auto run_job = [&](std::size_t i) {
    const Job& job = jobs[i];
    SweepRecord& rec = records[i];
    rec.check = config.check;
    rec.n = job.n;
    rec.p_or_nu = job.param;
    rec.trial = job.trial;
    rec.seed = trial_seed(config.seed, job.cell, job.trial);
    const auto start = std::chrono::steady_clock::now();
    const auto [a, b] = generate_pair(config.generator, job.n, rec.seed);
    const double param = job.param.value_or(config.check == CheckKind::P2Elementary ? 2.0 : 1.0);
    rec.outcome = run_check(config.check, a, b, param, config.nu_grid, config.tol);
    if (config.record_timing) {
      rec.wall_time_micros = std::chrono::duration_cast<std::chrono::microseconds>(
                                 std::chrono::steady_clock::now() - start)
                                 .count();
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(
      config.threads == 0 ? std::thread::hardware_concurrency() : config.threads, 1,
      std::max<std::size_t>(jobs.size(), 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) run_job(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = next++; i < jobs.size(); i = next++) run_job(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  return records;
}

SweepSummary summarize(std::span<const SweepRecord> records) {
  SweepSummary s;
  s.total = records.size();
  for (std::size_t i = 0; i < records.size(); ++i) {
    const CheckOutcome& o = records[i].outcome;
    (o.holds ? s.held : s.failed) += 1;
    s.min_slack = i == 0 ? o.min_slack : std::min(s.min_slack, o.min_slack);
  }
  return s;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string join(const std::vector<double>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) s += ';';
    s += format_double(values[i]);
  }
  return s;
}

}  // namespace

std::string format_csv_record(const SweepRecord& r) {
  std::string line;
  line += check_kind_name(r.check);
  line += ',' + std::to_string(r.n);
  line += ',' + (r.p_or_nu ? format_double(*r.p_or_nu) : std::string());
  line += ',' + std::to_string(r.trial);
  line += ',' + std::to_string(r.seed);
  line += ',' + join(r.outcome.lhs);
  line += ',' + join(r.outcome.rhs);
  line += ',' + format_double(r.outcome.min_slack);
  line += r.outcome.holds ? ",true" : ",false";
  line += ',' + std::to_string(r.wall_time_micros);
  return line;
}

std::string sweep_csv(std::span<const SweepRecord> records) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const SweepRecord& r : records) out += format_csv_record(r) + "\n";
  return out;
}

SweepSummary run_sweep(const SweepConfig& config, const std::filesystem::path& output_path) {
  const std::vector<SweepRecord> records = sweep_records(config);
  write_file(output_path, sweep_csv(records));
  return summarize(records);
}

SearchConfig search_config_from_json(const std::string& text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) parse_fail("search config must be a JSON object");
  SearchConfig c;
  c.target.kind = parse_target_kind(field<std::string>(doc, "target"));
  if (c.target.kind == TargetKind::GtChainEndToEnd || c.target.kind == TargetKind::GtChainStep) {
    c.target.param = field<double>(doc, "nu");
  } else {
    c.target.param = field<double>(doc, "p");
  }
  c.target.step = field_or<std::size_t>(doc, "step", 0);
  c.n = field<std::size_t>(doc, "n");
  c.restarts = field_or<std::size_t>(doc, "restarts", c.restarts);
  c.max_evals_per_restart = field_or<std::size_t>(doc, "max_evals_per_restart", c.max_evals_per_restart);
  c.simplex_init_radius = field_or<double>(doc, "simplex_init_radius", c.simplex_init_radius);
  c.seed = field_or<std::uint64_t>(doc, "seed", 0);
  c.convergence_eps = field_or<double>(doc, "convergence_eps", c.convergence_eps);
  c.threads = field_or<std::size_t>(doc, "threads", 1);
  c.validate();
  return c;
}

}  // namespace tracelab
