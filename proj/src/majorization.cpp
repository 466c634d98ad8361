#include "tracelab/majorization.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace tracelab {

namespace {

double scale_of(std::span<const double> a, std::span<const double> b) {
  double m = 1.0;
  for (double v : a) m = std::max(m, std::abs(v));
  for (double v : b) m = std::max(m, std::abs(v));
  return m;
}

void require_positive_tol(double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidParameter, "tolerance must be positive");
}

KyFanReport finish_report(std::vector<double> lhs, std::vector<double> rhs, double tol) {
  KyFanReport r;
  r.slacks.resize(lhs.size());
  for (std::size_t k = 0; k < lhs.size(); ++k) r.slacks[k] = rhs[k] - lhs[k];
  r.tol_used = tol * scale_of(lhs, rhs);
  r.holds = std::all_of(r.slacks.begin(), r.slacks.end(),
                        [&](double s) { return s >= -r.tol_used; });
  r.lhs_sums = std::move(lhs);
  r.rhs_sums = std::move(rhs);
  return r;
}

void check_k(std::size_t k, std::size_t n) {
  if (k < 1 || k > n) {
    std::ostringstream msg;
    msg << "k = " << k << " outside [1, " << n << "]";
    throw Error(ErrorCode::InvalidArgument, msg.str());
  }
}

std::vector<double> spectrum_sums(const HermitianMatrix& a) {
  return partial_sums_desc(hermitian_eigen(a).spectrum.values());
}

}  // namespace

double MajorizationVerdict::min_slack() const {
  double m = -total_residual;
  for (double s : slacks) m = std::min(m, s);
  return m;
}

double KyFanReport::min_slack() const {
  return slacks.empty() ? 0.0 : *std::min_element(slacks.begin(), slacks.end());
}

std::vector<double> partial_sums_desc(std::span<const double> x) {
  if (x.empty()) throw Error(ErrorCode::InvalidArgument, "partial sums of an empty vector");
  std::vector<double> sorted(x.begin(), x.end());
  std::stable_sort(sorted.begin(), sorted.end(), std::greater<>());
  std::vector<double> sums(sorted.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) sums[k] = acc += sorted[k];
  return sums;
}

MajorizationVerdict check_majorization(std::span<const double> x, std::span<const double> y,
                                       double tol) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::DimensionMismatch, "majorization needs equal lengths, got " +
                                                  std::to_string(x.size()) + " and " +
                                                  std::to_string(y.size()));
  }
  require_positive_tol(tol);
  MajorizationVerdict v;
  v.k_sums_lhs = partial_sums_desc(x);
  v.k_sums_rhs = partial_sums_desc(y);
  const std::size_t n = x.size();
  v.slacks.resize(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) v.slacks[k] = v.k_sums_rhs[k] - v.k_sums_lhs[k];
  v.total_residual = std::abs(v.k_sums_lhs.back() - v.k_sums_rhs.back());
  v.tol_used = tol * scale_of(v.k_sums_lhs, v.k_sums_rhs);
  v.holds = v.total_residual <= v.tol_used &&
            std::all_of(v.slacks.begin(), v.slacks.end(),
                        [&](double s) { return s >= -v.tol_used; });
  return v;
}

double ky_fan_sum(const Spectrum& s, std::size_t k) {
  check_k(k, s.size());
  double sum = 0.0;
  for (std::size_t j = 0; j < k; ++j) sum += s[j];
  return sum;
}

double ky_fan_sum(const HermitianMatrix& a, std::size_t k) {
  check_k(k, a.n());
  return ky_fan_sum(hermitian_eigen(a).spectrum, k);
}

KyFanReport ky_fan_check(const HermitianMatrix& a, const HermitianMatrix& b, double tol) {
  require_same_dimension(a.dense(), b.dense());
  require_positive_tol(tol);
  std::vector<double> lhs = spectrum_sums(HermitianMatrix(a.dense() + b.dense()));
  std::vector<double> rhs = spectrum_sums(a);
  const std::vector<double> sb = spectrum_sums(b);
  for (std::size_t k = 0; k < rhs.size(); ++k) rhs[k] += sb[k];
  return finish_report(std::move(lhs), std::move(rhs), tol);
}

KyFanReport symmetric_ky_fan_check(const HermitianMatrix& x, const HermitianMatrix& y, double tol) {
  require_same_dimension(x.dense(), y.dense());
  require_positive_tol(tol);
  std::vector<double> lhs = spectrum_sums(x);
  for (double& v : lhs) v *= 2.0;
  std::vector<double> rhs = spectrum_sums(HermitianMatrix(x.dense() + y.dense()));
  const std::vector<double> minus = spectrum_sums(HermitianMatrix(x.dense() - y.dense()));
  for (std::size_t k = 0; k < rhs.size(); ++k) rhs[k] += minus[k];
  return finish_report(std::move(lhs), std::move(rhs), tol);
}

}  // namespace tracelab
