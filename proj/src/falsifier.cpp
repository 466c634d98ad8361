#include "tracelab/falsifier.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <thread>

#include "tracelab/matrix_gen.hpp"
#include "tracelab/trace_inequalities.hpp"

namespace tracelab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Nelder-Mead coefficients.
constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;

// Tr[M^p] for any finite p != 0 on strictly positive spectra; +inf otherwise.
double signed_trace_power(const PsdMatrix& m, double p) {
  double sum = 0.0;
  for (double v : m.spectrum().values()) {
    if (p < 0.0 && !(v > 0.0)) return kInf;
    sum += std::pow(v, p);
  }
  return sum;
}

double unasserted_problem2_slack(const PsdMatrix& t, const PsdMatrix& s, double p) {
  const DenseMatrix& T = t.dense();
  const DenseMatrix& S = s.dense();
  const DenseMatrix t2 = T * T;
  const PsdMatrix lhs(t2 + S * t2 * S);
  const PsdMatrix rhs(t2 + T * (S * S) * T);
  const double l = signed_trace_power(lhs, p);
  const double r = signed_trace_power(rhs, p);
  if (!std::isfinite(l) || !std::isfinite(r)) return kInf;
  return r - l;
}

struct RestartOutcome {
  double best = kInf;
  std::vector<double> x;
  std::size_t evals = 0;
};

class Restart {
 public:
  Restart(const SearchConfig& config, std::size_t index)
      : config_(config), dim_(2 * config.n * config.n), rng_(derive_seed(config.seed, index)) {}

  RestartOutcome run() {
    std::vector<double> start(dim_);
    for (double& v : start) v = rng_.gaussian();
    if (!init_simplex(start)) return finish();
    while (true) {
      order();
      if (diameter() < config_.convergence_eps) {
        const std::vector<double> centre = points_[0];
        if (!init_simplex(centre)) break;
        continue;
      }
      if (!step()) break;
    }
    return finish();
  }

 private:
  std::optional<double> eval(const std::vector<double>& x) {
    if (outcome_.evals >= config_.max_evals_per_restart) return std::nullopt;
    ++outcome_.evals;
    const std::size_t half = config_.n * config_.n;
    double f = kInf;
    try {
      f = target_slack(config_.target, search_operand(std::span(x).first(half), config_.n),
                       search_operand(std::span(x).subspan(half), config_.n));
    } catch (const Error&) {
    }
    if (std::isnan(f)) f = kInf;
    if (f < outcome_.best || outcome_.x.empty()) {
      outcome_.best = f;
      outcome_.x = x;
    }
    return f;
  }

  bool init_simplex(const std::vector<double>& centre) {
    points_.assign(dim_ + 1, centre);
    values_.assign(dim_ + 1, kInf);
    for (std::size_t i = 0; i < dim_; ++i) points_[i + 1][i] += config_.simplex_init_radius;
    for (std::size_t i = 0; i <= dim_; ++i) {
      const auto f = eval(points_[i]);
      if (!f) return false;
      values_[i] = *f;
    }
    return true;
  }

  void order() {
    std::vector<std::size_t> idx(points_.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return values_[a] < values_[b]; });
    std::vector<std::vector<double>> p;
    std::vector<double> v;
    for (std::size_t i : idx) {
      p.push_back(std::move(points_[i]));
      v.push_back(values_[i]);
    }
    points_ = std::move(p);
    values_ = std::move(v);
  }

  double diameter() const {
    double d = 0.0;
    for (std::size_t i = 1; i < points_.size(); ++i)
      for (std::size_t j = 0; j < dim_; ++j) d = std::max(d, std::abs(points_[i][j] - points_[0][j]));
    return d;
  }

  std::vector<double> along(const std::vector<double>& c, const std::vector<double>& x, double t) const {
    std::vector<double> r(dim_);
    for (std::size_t j = 0; j < dim_; ++j) r[j] = c[j] + t * (x[j] - c[j]);
    return r;
  }

  // One Nelder-Mead iteration on an ordered simplex; false once the budget is spent.
  bool step() {
    const std::size_t worst = dim_;
    std::vector<double> centroid(dim_, 0.0);
    for (std::size_t i = 0; i < worst; ++i)
      for (std::size_t j = 0; j < dim_; ++j) centroid[j] += points_[i][j];
    for (double& c : centroid) c /= static_cast<double>(worst);

    std::vector<double> reflected = along(centroid, points_[worst], -kReflect);
    const auto fr = eval(reflected);
    if (!fr) return false;

    if (*fr < values_[0]) {
      std::vector<double> expanded = along(centroid, reflected, kExpand);
      const auto fe = eval(expanded);
      if (!fe) return false;
      if (*fe < *fr) {
        accept(worst, std::move(expanded), *fe);
      } else {
        accept(worst, std::move(reflected), *fr);
      }
      return true;
    }
    if (*fr < values_[worst - 1]) {
      accept(worst, std::move(reflected), *fr);
      return true;
    }
    if (*fr < values_[worst]) {
      std::vector<double> contracted = along(centroid, reflected, kContract);
      const auto fc = eval(contracted);
      if (!fc) return false;
      if (*fc <= *fr) {
        accept(worst, std::move(contracted), *fc);
        return true;
      }
    } else {
      std::vector<double> contracted = along(centroid, points_[worst], kContract);
      const auto fc = eval(contracted);
      if (!fc) return false;
      if (*fc < values_[worst]) {
        accept(worst, std::move(contracted), *fc);
        return true;
      }
    }
    for (std::size_t i = 1; i <= dim_; ++i) {
      points_[i] = along(points_[0], points_[i], kShrink);
      const auto f = eval(points_[i]);
      if (!f) return false;
      values_[i] = *f;
    }
    return true;
  }

  void accept(std::size_t i, std::vector<double> x, double f) {
    points_[i] = std::move(x);
    values_[i] = f;
  }

  RestartOutcome finish() { return std::move(outcome_); }

  const SearchConfig& config_;
  std::size_t dim_;
  SplitMix64 rng_;
  std::vector<std::vector<double>> points_;
  std::vector<double> values_;
  RestartOutcome outcome_;
};

}  // namespace

const char* target_kind_name(TargetKind kind) noexcept {
  switch (kind) {
    case TargetKind::Problem2: return "problem2";
    case TargetKind::Conjecture1: return "conjecture1";
    case TargetKind::GtChainEndToEnd: return "gt_chain";
    case TargetKind::GtChainStep: return "gt_chain_step";
    case TargetKind::Problem2Unasserted: return "problem2_unasserted";
  }
  return "?";
}

TargetKind parse_target_kind(const std::string& name) {
  for (TargetKind k : {TargetKind::Problem2, TargetKind::Conjecture1, TargetKind::GtChainEndToEnd,
                       TargetKind::GtChainStep, TargetKind::Problem2Unasserted}) {
    if (name == target_kind_name(k)) return k;
  }
  throw Error(ErrorCode::InvalidParameter, "unknown search target '" + name + "'");
}

void SearchConfig::validate() const {
  if (n < 1 || n > kMaxDimension) throw Error(ErrorCode::InvalidParameter, "n must lie in [1, 64]");
  if (restarts < 1) throw Error(ErrorCode::InvalidParameter, "restarts must be at least 1");
  if (max_evals_per_restart < n * (n + 1)) {
    throw Error(ErrorCode::InvalidParameter, "max_evals_per_restart must be at least n(n+1)");
  }
  if (!(simplex_init_radius > 0.0)) throw Error(ErrorCode::InvalidParameter, "simplex radius must be positive");
  if (!(convergence_eps >= 0.0)) throw Error(ErrorCode::InvalidParameter, "convergence_eps must be >= 0");
  const double v = target.param;
  switch (target.kind) {
    case TargetKind::Problem2:
    case TargetKind::Conjecture1:
      if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorCode::InvalidExponent, "target exponent must be positive");
      break;
    case TargetKind::GtChainStep:
      if (target.step > 2) throw Error(ErrorCode::InvalidParameter, "chain step must be 0, 1 or 2");
      [[fallthrough]];
    case TargetKind::GtChainEndToEnd:
      if (!(v > 0.0 && v <= 1.0)) throw Error(ErrorCode::InvalidParameter, "nu must lie in (0, 1]");
      break;
    case TargetKind::Problem2Unasserted:
      if (v == 0.0 || !std::isfinite(v)) throw Error(ErrorCode::InvalidExponent, "exponent must be finite and non-zero");
      break;
  }
}

PsdMatrix psd_from_params(std::span<const double> theta, std::size_t n) {
  if (theta.size() != n * n) {
    std::ostringstream msg;
    msg << "expected " << n * n << " parameters for n = " << n << ", got " << theta.size();
    throw Error(ErrorCode::InvalidArgument, msg.str());
  }
  DenseMatrix lower(n);
  for (std::size_t i = 0; i < n; ++i) lower(i, i) = theta[i];
  std::size_t at = n;
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      lower(i, j) = Complex(theta[at], theta[at + 1]);
      at += 2;
    }
  }
  return PsdMatrix(lower * adjoint(lower));
}

std::vector<double> params_from_factor(const DenseMatrix& lower) {
  const std::size_t n = lower.n();
  std::vector<double> theta;
  theta.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) theta.push_back(lower(i, i).real());
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      theta.push_back(lower(i, j).real());
      theta.push_back(lower(i, j).imag());
    }
  }
  return theta;
}

double target_slack(const SearchTarget& target, const PsdMatrix& first, const PsdMatrix& second) {
  switch (target.kind) {
    case TargetKind::Problem2: return problem2_sides(first, second, target.param).slack;
    case TargetKind::Conjecture1: return conjecture1_sides(first, second, target.param).sides.slack;
    case TargetKind::GtChainEndToEnd: return gt_chain(first, second, target.param).end_to_end_slack;
    case TargetKind::GtChainStep: {
      if (target.step > 2) throw Error(ErrorCode::InvalidParameter, "chain step must be 0, 1 or 2");
      return gt_chain(first, second, target.param).chain.adjacent_slacks[target.step];
    }
    case TargetKind::Problem2Unasserted: return unasserted_problem2_slack(first, second, target.param);
  }
  throw Error(ErrorCode::InvalidParameter, "unknown target");
}

PsdMatrix search_operand(std::span<const double> theta, std::size_t n) {
  const PsdMatrix raw = psd_from_params(theta, n);
  const double norm = raw.spectrum().max();
  if (norm <= 1.0) return raw;
  return PsdMatrix(Complex(1.0 / norm) * raw.dense());
}

double slack_objective(const SearchTarget& target, std::span<const double> theta_t,
                       std::span<const double> theta_s, std::size_t n) {
  return target_slack(target, psd_from_params(theta_t, n), psd_from_params(theta_s, n));
}

SearchResult search_min_slack(const SearchConfig& config) {
  config.validate();
  std::vector<RestartOutcome> outcomes(config.restarts);

  std::size_t workers = config.threads == 0 ? std::thread::hardware_concurrency() : config.threads;
  workers = std::clamp<std::size_t>(workers, 1, config.restarts);
  if (workers == 1) {
    for (std::size_t r = 0; r < config.restarts; ++r) outcomes[r] = Restart(config, r).run();
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t r = next++; r < config.restarts; r = next++) outcomes[r] = Restart(config, r).run();
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  SearchResult result;
  std::size_t best_index = 0;
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    result.per_restart_bests.push_back(outcomes[r].best);
    result.eval_count += outcomes[r].evals;
    if (outcomes[r].best < outcomes[best_index].best) best_index = r;
  }
  const RestartOutcome& best = outcomes[best_index];
  const std::size_t half = config.n * config.n;
  result.best_slack = best.best;
  result.best_theta_t.assign(best.x.begin(), best.x.begin() + static_cast<std::ptrdiff_t>(half));
  result.best_theta_s.assign(best.x.begin() + static_cast<std::ptrdiff_t>(half), best.x.end());
  result.witness_t = search_operand(result.best_theta_t, config.n);
  result.witness_s = search_operand(result.best_theta_s, config.n);
  result.violated = config.target.asserted() && result.best_slack < -kReportTol;
  return result;
}

}  // namespace tracelab
