#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tracelab/linalg.hpp"

namespace tracelab {

inline constexpr double kDefaultCheckTol = 1e-9;

/// Record of x ≺ y. Slacks are rhs - lhs for k = 1..n-1; holds iff every
/// slack >= -tol_used and total_residual <= tol_used.
struct MajorizationVerdict {
  std::vector<double> k_sums_lhs;
  std::vector<double> k_sums_rhs;
  std::vector<double> slacks;
  double total_residual = 0.0;
  bool holds = false;
  /// tol * max(1, largest |partial sum|).
  double tol_used = 0.0;

  /// Smallest of the k-slacks and -total_residual.
  double min_slack() const;
};

/// Per-k report for the Ky Fan partial-sum inequalities, k = 1..n.
struct KyFanReport {
  std::vector<double> lhs_sums;
  std::vector<double> rhs_sums;
  std::vector<double> slacks;
  bool holds = false;
  double tol_used = 0.0;

  double min_slack() const;
};

/// result[k-1] = sum of the k largest entries of x.
std::vector<double> partial_sums_desc(std::span<const double> x);

MajorizationVerdict check_majorization(std::span<const double> x, std::span<const double> y,
                                       double tol = kDefaultCheckTol);

/// Sum of the k largest eigenvalues, 1 <= k <= n.
double ky_fan_sum(const HermitianMatrix& a, std::size_t k);
double ky_fan_sum(const Spectrum& s, std::size_t k);

/// Σλ↓(A+B) <= Σλ↓(A) + Σλ↓(B) for every k.
KyFanReport ky_fan_check(const HermitianMatrix& a, const HermitianMatrix& b,
                         double tol = kDefaultCheckTol);

/// 2Σλ↓(X) <= Σλ↓(X+Y) + Σλ↓(X-Y) for every k.
KyFanReport symmetric_ky_fan_check(const HermitianMatrix& x, const HermitianMatrix& y,
                                   double tol = kDefaultCheckTol);

}  // namespace tracelab
