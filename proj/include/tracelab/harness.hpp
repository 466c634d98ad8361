#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tracelab/falsifier.hpp"
#include "tracelab/linalg.hpp"
#include "tracelab/matrix_gen.hpp"

namespace tracelab {

// ---- matrix files ---------------------------------------------------------
//
// {"n": 2, "kind": "psd" | "hermitian", "entries": [[[re, im], ...], ...]}
// entries are row-major, n rows of n [re, im] pairs.

enum class MatrixKind { Psd, Hermitian };

struct LoadedMatrix {
  MatrixKind kind = MatrixKind::Hermitian;
  HermitianMatrix hermitian;
  /// Set when kind == Psd.
  std::optional<PsdMatrix> psd;
};

LoadedMatrix parse_matrix_json(const std::string& text);
LoadedMatrix parse_matrix_file(const std::filesystem::path& path);

std::string matrix_to_json(const DenseMatrix& m, MatrixKind kind);
void write_matrix_file(const std::filesystem::path& path, const DenseMatrix& m, MatrixKind kind);

/// Writes <prefix>_T.json and <prefix>_S.json for a search witness pair.
void dump_witnesses(const SearchResult& result, const std::string& prefix);

// ---- checks -----------------------------------------------------------------

enum class CheckKind {
  Problem2,
  Conjecture1,
  Theorem1Majorization,
  ProofChain,
  GtChain,
  KyFan,
  SymmetricKyFan,
  P2Elementary,
  GtLimitProbe,
};

const char* check_kind_name(CheckKind kind) noexcept;
CheckKind parse_check_kind(const std::string& name);

/// Checks parameterized by p use p_grid, by nu use nu_grid.
bool check_uses_p(CheckKind kind) noexcept;
bool check_uses_nu(CheckKind kind) noexcept;
/// Whether the check needs PSD operands (KyFan and SymmetricKyFan accept any Hermitian pair).
bool check_needs_psd(CheckKind kind) noexcept;

/// Flattened outcome of one check on one pair. holds is judged uniformly:
/// min_slack >= -tol * max(1, largest |value| in lhs and rhs).
struct CheckOutcome {
  std::vector<double> lhs;
  std::vector<double> rhs;  // empty for chain checks
  double min_slack = 0.0;
  bool holds = false;
};

bool judge(std::span<const double> lhs, std::span<const double> rhs, double min_slack, double tol);

/// param is p or nu (ignored by checks that take neither); nu_grid is used by GtLimitProbe.
CheckOutcome run_check(CheckKind kind, const HermitianMatrix& a, const HermitianMatrix& b,
                       double param, std::span<const double> nu_grid, double tol);

// ---- sweeps -----------------------------------------------------------------

struct SweepConfig {
  CheckKind check = CheckKind::Problem2;
  std::vector<std::size_t> dims;
  std::vector<double> p_grid;
  std::vector<double> nu_grid;
  std::size_t trials_per_cell = 1;
  /// n and seed are overwritten per trial.
  GeneratorSpec generator;
  std::uint64_t seed = 0;
  double tol = 1e-9;
  std::size_t threads = 1;
  /// When false, wall_time_micros is written as 0.
  bool record_timing = false;

  void validate() const;
};

SweepConfig sweep_config_from_json(const std::string& text);
std::string sweep_config_to_json(const SweepConfig& config);

struct SweepRecord {
  CheckKind check = CheckKind::Problem2;
  std::size_t n = 0;
  std::optional<double> p_or_nu;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  CheckOutcome outcome;
  std::int64_t wall_time_micros = 0;
};

struct SweepSummary {
  std::size_t total = 0;
  std::size_t held = 0;
  std::size_t failed = 0;
  double min_slack = 0.0;
};

/// Seed of trial `trial` in dimension cell `cell` (index into dims). Grid values
/// of one cell share pairs.
std::uint64_t trial_seed(std::uint64_t seed, std::size_t cell, std::size_t trial) noexcept;

/// Operand pair for one trial, drawn from the generator template.
std::pair<HermitianMatrix, HermitianMatrix> generate_pair(const GeneratorSpec& tmpl, std::size_t n,
                                                          std::uint64_t seed);

/// Records in canonical (dimension, grid value, trial) order.
std::vector<SweepRecord> sweep_records(const SweepConfig& config);

SweepSummary summarize(std::span<const SweepRecord> records);

inline constexpr const char* kCsvHeader =
    "check,n,p_or_nu,trial,seed,lhs,rhs,min_slack,holds,wall_time_micros";

std::string format_double(double v);
std::string format_csv_record(const SweepRecord& record);
std::string sweep_csv(std::span<const SweepRecord> records);

/// Runs the sweep and writes the CSV to output_path.
SweepSummary run_sweep(const SweepConfig& config, const std::filesystem::path& output_path);

// ---- search config ------------------------------------------------------------

SearchConfig search_config_from_json(const std::string& text);

}  // namespace tracelab
