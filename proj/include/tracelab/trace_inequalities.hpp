#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tracelab/linalg.hpp"
#include "tracelab/majorization.hpp"

namespace tracelab {

enum class Direction { LhsLeqRhs, LhsGeqRhs, Equal };

const char* direction_name(Direction d) noexcept;

/// Expected direction for Tr[(T²+ST²S)^p] vs Tr[(T²+TS²T)^p]:
/// Equal at p = 1, LhsLeqRhs above, LhsGeqRhs below. Throws InvalidExponent for p <= 0.
Direction direction_for_exponent(double p);

/// Two evaluated sides of one inequality. slack >= 0 means the expected
/// direction holds; for Equal, slack = -|lhs - rhs|.
struct SidePair {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  Direction expected_direction = Direction::LhsLeqRhs;
  double p_or_nu = 0.0;
  bool holds = false;
  /// tol * max(1, |lhs|, |rhs|).
  double tol_used = 0.0;
};

SidePair make_side_pair(double lhs, double rhs, Direction direction, double p_or_nu, double tol);

/// Relation between consecutive chain terms t[i] and t[i+1].
enum class ChainRelation { Equal, Leq, Geq };

/// Evaluated multi-step chain. adjacent_slacks[i] is t[i+1]-t[i] for Leq,
/// t[i]-t[i+1] for Geq and -|t[i]-t[i+1]| for Equal.
struct ChainReport {
  std::vector<std::string> labels;
  std::vector<double> terms;
  std::vector<ChainRelation> relations;
  std::vector<double> adjacent_slacks;
  bool holds = false;
  double tol_used = 0.0;

  double min_slack() const;
};

ChainReport make_chain(std::vector<std::string> labels, std::vector<double> terms,
                       std::vector<ChainRelation> relations, double tol);

/// lhs = Tr[(T²+ST²S)^p], rhs = Tr[(T²+TS²T)^p].
SidePair problem2_sides(const PsdMatrix& t, const PsdMatrix& s, double p,
                        double tol = kDefaultCheckTol);

/// λ↓(T²+ST²S) ≺ λ↓(T²+TS²T).
MajorizationVerdict theorem1_majorization(const PsdMatrix& t, const PsdMatrix& s,
                                          double tol = kDefaultCheckTol);

/// Every line of the factorization argument for one k. The chain terms are
///   2Σλ↓(T²+TS²T)
///   = Σλ↓((T+iTS)(T-iST)) + Σλ↓((T-iTS)(T+iST))
///   = Σλ↓((T-iST)(T+iTS)) + Σλ↓((T+iST)(T-iTS))
///   = Σλ↓(X+Y) + Σλ↓(X-Y),  X = T²+ST²S, Y = i(T²S-ST²)
///   >= 2Σλ↓(X).
struct ProofChainReport {
  std::size_t k = 0;
  ChainReport chain;
  /// Σλ↓ of (T+iTS)(T-iST) and (T-iTS)(T+iST) individually.
  std::array<double, 2> factor_sums{};
  /// Largest |factor_sums[i] - Σλ↓(T²+TS²T)|.
  double factor_residual = 0.0;
  /// Largest entrywise gap between the full spectra of ZZ* and Z*Z, Z = T±iTS.
  double similarity_residual = 0.0;
  /// max(1, ||T+iTS||_F², ||T-iTS||_F²).
  double similarity_scale = 1.0;
  /// Largest Frobenius gap between (T∓iST)(T±iTS) and X±Y.
  double expansion_residual = 0.0;
  /// 2Σλ↓(T²+TS²T) - 2Σλ↓(T²+ST²S).
  double final_slack = 0.0;
  bool holds = false;

  double min_slack() const;
};

ProofChainReport proof_chain_spectra(const PsdMatrix& t, const PsdMatrix& s, std::size_t k,
                                     double tol = kDefaultCheckTol);

/// p = 2 traces by direct products Tr[M·M], cross-checked against the spectral route.
struct P2ElementaryReport {
  SidePair product_route;
  double spectral_lhs = 0.0;
  double spectral_rhs = 0.0;
  double route_residual = 0.0;
  bool routes_agree = false;
  bool holds = false;
};

P2ElementaryReport p2_elementary_check(const PsdMatrix& t, const PsdMatrix& s,
                                       double tol = kDefaultCheckTol);

/// lhs = Tr[(I+X+Y+Y^½XY^½)^p], rhs = Tr[{(I+X)^½(I+Y)(I+X)^½}^p], with the
/// same pair re-evaluated through problem2_sides((I+X)^½, Y^½, p).
struct Conjecture1Report {
  SidePair sides;
  double reformulated_lhs = 0.0;
  double reformulated_rhs = 0.0;
  double reformulation_residual = 0.0;
  bool reformulation_agrees = false;
  bool holds = false;
};

Conjecture1Report conjecture1_sides(const PsdMatrix& x, const PsdMatrix& y, double p,
                                    double tol = kDefaultCheckTol);

/// (I + nu X)^(1/nu), nu in (0, 1].
PsdMatrix exp_nu(const PsdMatrix& x, double nu);

/// Tr[exp_nu(X+Y)] <= Tr[exp_nu(X+Y+nu Y^½XY^½)] <= Tr[exp_nu(X+Y+nu XY)] <= Tr[exp_nu(X) exp_nu(Y)].
/// The third term uses the congruent form {(I+nuX)^½(I+nuY)(I+nuX)^½}^(1/nu).
struct GtChainReport {
  double nu = 0.0;
  ChainReport chain;
  /// terms[3] - terms[0].
  double end_to_end_slack = 0.0;
  bool holds = false;
};

GtChainReport gt_chain(const PsdMatrix& x, const PsdMatrix& y, double nu,
                       double tol = kDefaultCheckTol);

struct LimitProbeReport {
  std::vector<double> nus;
  /// |Tr[exp_nu(X)] - Tr[e^X]| per nu.
  std::vector<double> deviations;
  std::vector<double> gt_end_to_end_slacks;
  double trace_exp_x = 0.0;
  /// Tr[e^X e^Y] - Tr[e^(X+Y)].
  double classical_gt_slack = 0.0;
  /// deviations non-increasing within tol_used.
  bool monotone = false;
  bool strictly_decreasing = false;
  bool holds = false;
  /// tol * max(1, Tr[e^X]).
  double tol_used = 0.0;

  double min_slack() const;
};

/// nu_grid must be non-empty, strictly decreasing and inside (0, 1].
LimitProbeReport classical_gt_limit_probe(const PsdMatrix& x, const PsdMatrix& y,
                                          std::span<const double> nu_grid,
                                          double tol = kDefaultCheckTol);

}  // namespace tracelab
