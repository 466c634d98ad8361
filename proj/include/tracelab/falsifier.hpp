#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tracelab/linalg.hpp"

namespace tracelab {

/// Absolute slack below which a search result counts as a violation.
inline constexpr double kReportTol = 1e-8;

enum class TargetKind {
  Problem2,         // param = p > 0
  Conjecture1,      // param = p > 0
  GtChainEndToEnd,  // param = nu in (0, 1]
  GtChainStep,      // param = nu, step in {0, 1, 2}
  Problem2Unasserted,  // param = any finite p != 0; reported, never judged
};

const char* target_kind_name(TargetKind kind) noexcept;
TargetKind parse_target_kind(const std::string& name);

struct SearchTarget {
  TargetKind kind = TargetKind::Problem2;
  double param = 2.0;
  std::size_t step = 0;

  /// Whether a negative slack would contradict a proven statement.
  bool asserted() const noexcept { return kind != TargetKind::Problem2Unasserted; }
};

struct SearchConfig {
  SearchTarget target;
  std::size_t n = 2;
  std::size_t restarts = 20;
  std::size_t max_evals_per_restart = 2000;
  double simplex_init_radius = 0.5;
  std::uint64_t seed = 0;
  double convergence_eps = 1e-10;
  /// Worker threads for restarts; 0 means hardware concurrency. Output does not depend on it.
  std::size_t threads = 1;

  void validate() const;
};

struct SearchResult {
  double best_slack = 0.0;
  /// T (or X for the Conjecture1 / Golden-Thompson targets).
  PsdMatrix witness_t{DenseMatrix(1)};
  /// S (or Y).
  PsdMatrix witness_s{DenseMatrix(1)};
  std::vector<double> best_theta_t;
  std::vector<double> best_theta_s;
  std::size_t eval_count = 0;
  std::vector<double> per_restart_bests;
  bool violated = false;
};

/// L·L* where L is lower triangular: theta[0..n) is the real diagonal, then
/// (re, im) pairs for the strictly-lower entries in row-major order. Size n².
PsdMatrix psd_from_params(std::span<const double> theta, std::size_t n);

/// Inverse layout helper: packs a lower-triangular factor into a parameter vector.
std::vector<double> params_from_factor(const DenseMatrix& lower);

/// psd_from_params, rescaled to unit spectral norm when its norm exceeds 1.
/// The search evaluates targets on these operands.
PsdMatrix search_operand(std::span<const double> theta, std::size_t n);
/// Builds the pair from parameters and returns the target's signed slack.
double slack_objective(const SearchTarget& target, std::span<const double> theta_t,
                       std::span<const double> theta_s, std::size_t n);

/// Slack of the target evaluated on an explicit pair.
double target_slack(const SearchTarget& target, const PsdMatrix& first, const PsdMatrix& second);

/// Restarted Nelder-Mead over (theta_T, theta_S). Deterministic for a fixed config.
SearchResult search_min_slack(const SearchConfig& config);

}  // namespace tracelab
