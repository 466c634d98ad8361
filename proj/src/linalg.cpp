#include "tracelab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace tracelab {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonRealTrace: return "NonRealTrace";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::InvalidExponent: return "InvalidExponent";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotPsd: return "NotPsd";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

namespace {

void check_dimension(std::size_t n) {
  if (n < 1 || n > kMaxDimension) {
    throw Error(ErrorCode::InvalidArgument,
                "matrix dimension " + std::to_string(n) + " outside [1, 64]");
  }
}

bool finite(const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

DenseMatrix::DenseMatrix(std::size_t n) : n_(n), data_() {
  check_dimension(n);
  data_.assign(n * n, Complex{});
}

DenseMatrix::DenseMatrix(std::size_t n, std::vector<Complex> entries)
    : n_(n), data_(std::move(entries)) {
  check_dimension(n);
  if (data_.size() != n * n) {
    throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(n * n) +
                                                  " entries, got " + std::to_string(data_.size()));
  }
  for (std::size_t k = 0; k < data_.size(); ++k) {
    if (!finite(data_[k])) {
      throw Error(ErrorCode::DomainError, "non-finite entry at (" + std::to_string(k / n) + "," +
                                              std::to_string(k % n) + ")");
    }
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> diag) {
  const std::size_t n = diag.size();
  std::vector<Complex> entries(n * n);
  for (std::size_t i = 0; i < n; ++i) entries[i * n + i] = diag[i];
  return DenseMatrix(n, std::move(entries));
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
  const std::size_t n = rows.size();
  std::vector<Complex> entries;
  entries.reserve(n * n);
  for (const auto& row : rows) {
    if (row.size() != n) throw Error(ErrorCode::DimensionMismatch, "rows must form a square matrix");
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return DenseMatrix(n, std::move(entries));
}

void require_same_dimension(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.n() != b.n()) {
    throw Error(ErrorCode::DimensionMismatch,
                "dimension mismatch: " + std::to_string(a.n()) + " vs " + std::to_string(b.n()));
  }
}

DenseMatrix adjoint(const DenseMatrix& a) {
  DenseMatrix r(a.n());
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t j = 0; j < a.n(); ++j) r(i, j) = std::conj(a(j, i));
  return r;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_dimension(a, b);
  const std::size_t n = a.n();
  DenseMatrix r(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < n; ++j) r(i, j) += aik * b(k, j);
    }
  }
  return r;
}

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_dimension(a, b);
  DenseMatrix r = a;
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t j = 0; j < a.n(); ++j) r(i, j) += b(i, j);
  return r;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_dimension(a, b);
  DenseMatrix r = a;
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t j = 0; j < a.n(); ++j) r(i, j) -= b(i, j);
  return r;
}

DenseMatrix operator*(Complex s, const DenseMatrix& a) {
  DenseMatrix r = a;
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t j = 0; j < a.n(); ++j) r(i, j) *= s;
  return r;
}

double frobenius_norm(const DenseMatrix& a) {
  double sum = 0.0;
  for (const Complex& z : a.entries()) sum += std::norm(z);
  return std::sqrt(sum);
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_dimension(a, b);
  double m = 0.0;
  for (std::size_t k = 0; k < a.entries().size(); ++k)
    m = std::max(m, std::abs(a.entries()[k] - b.entries()[k]));
  return m;
}

DenseMatrix symmetrize(const DenseMatrix& a) {
  DenseMatrix r(a.n());
  for (std::size_t i = 0; i < a.n(); ++i) {
    r(i, i) = a(i, i).real();
    for (std::size_t j = i + 1; j < a.n(); ++j) {
      const Complex v = 0.5 * (a(i, j) + std::conj(a(j, i)));
      r(i, j) = v;
      r(j, i) = std::conj(v);
    }
  }
  return r;
}

double trace_real(const DenseMatrix& a, double trace_tol) {
  Complex t{};
  for (std::size_t i = 0; i < a.n(); ++i) t += a(i, i);
  const double bound = trace_tol * std::max(1.0, frobenius_norm(a));
  if (std::abs(t.imag()) > bound) {
    std::ostringstream msg;
    msg << "trace has imaginary part " << t.imag() << " above " << bound;
    throw Error(ErrorCode::NonRealTrace, msg.str());
  }
  return t.real();
}

HermitianMatrix::HermitianMatrix(const DenseMatrix& a, double herm_tol) : inner_(a.n()) {
  double residual2 = 0.0;
  double worst = -1.0;
  std::size_t wi = 0, wj = 0;
  for (std::size_t i = 0; i < a.n(); ++i) {
    for (std::size_t j = 0; j < a.n(); ++j) {
      const double d = std::abs(a(i, j) - std::conj(a(j, i)));
      residual2 += d * d;
      if (d > worst) {
        worst = d;
        wi = i;
        wj = j;
      }
    }
  }
  const double residual = std::sqrt(residual2);
  const double bound = herm_tol * std::max(1.0, frobenius_norm(a));
  if (residual > bound) {
    std::ostringstream msg;
    msg << "not Hermitian: ||A - A*||_F = " << residual << " exceeds " << bound
        << "; worst entry (" << wi << "," << wj << ") = " << a(wi, wj) << " vs conj of (" << wj
        << "," << wi << ") = " << a(wj, wi);
    throw Error(ErrorCode::NotHermitian, msg.str());
  }
  inner_ = symmetrize(a);
}

Spectrum::Spectrum(std::vector<double> values) : values_(std::move(values)) {
  std::stable_sort(values_.begin(), values_.end(), std::greater<>());
}

namespace {

double off_diagonal_norm(const DenseMatrix& a) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t j = 0; j < a.n(); ++j)
      if (i != j) sum += std::norm(a(i, j));
  return std::sqrt(sum);
}

// Annihilates A(p,q) with J = D R, where D rephases column q so the pivot is
// real and R is the real symmetric Jacobi rotation. Applies A <- J* A J, V <- V J.
void jacobi_rotate(DenseMatrix& a, DenseMatrix& v, std::size_t p, std::size_t q) {
  const Complex apq = a(p, q);
  const double r = std::abs(apq);
  if (r == 0.0) return;
  const Complex phase = apq / r;
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double theta = (aqq - app) / (2.0 * r);
  const double t = std::isinf(theta * theta)
                       ? 0.5 / theta
                       : std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;

  const Complex jpp = c;
  const Complex jpq = s;
  const Complex jqp = -s * std::conj(phase);
  const Complex jqq = c * std::conj(phase);

  const std::size_t n = a.n();
  for (std::size_t k = 0; k < n; ++k) {
    const Complex akp = a(k, p);
    const Complex akq = a(k, q);
    a(k, p) = akp * jpp + akq * jqp;
    a(k, q) = akp * jpq + akq * jqq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const Complex apk = a(p, k);
    const Complex aqk = a(q, k);
    a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
    a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const Complex vkp = v(k, p);
    const Complex vkq = v(k, q);
    v(k, p) = vkp * jpp + vkq * jqp;
    v(k, q) = vkp * jpq + vkq * jqq;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = app - t * r;
  a(q, q) = aqq + t * r;
}

}  // namespace

EigenDecomposition hermitian_eigen(const HermitianMatrix& h, double eig_tol, int max_sweeps) {
  const std::size_t n = h.n();
  DenseMatrix a = h.dense();
  DenseMatrix v = DenseMatrix::identity(n);
  const double threshold = eig_tol * frobenius_norm(a);

  int sweep = 0;
  while (off_diagonal_norm(a) > threshold) {
    if (sweep == max_sweeps) {
      std::ostringstream msg;
      msg << "Jacobi did not converge in " << max_sweeps << " sweeps (off-diagonal "
          << off_diagonal_norm(a) << ", target " << threshold << ")";
      throw Error(ErrorCode::ConvergenceFailure, msg.str());
    }
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) jacobi_rotate(a, v, p, q);
    ++sweep;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x).real() > a(y, y).real(); });

  std::vector<double> values(n);
  DenseMatrix basis(n);
  for (std::size_t j = 0; j < n; ++j) {
    values[j] = a(order[j], order[j]).real();
    for (std::size_t i = 0; i < n; ++i) basis(i, j) = v(i, order[j]);
  }
  return EigenDecomposition{Spectrum(std::move(values)), std::move(basis)};
}

DenseMatrix reconstruct(const DenseMatrix& basis, std::span<const double> values) {
  const std::size_t n = basis.n();
  DenseMatrix r(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      Complex sum{};
      for (std::size_t k = 0; k < n; ++k) sum += basis(i, k) * values[k] * std::conj(basis(j, k));
      r(i, j) = sum;
      r(j, i) = std::conj(sum);
    }
    r(i, i) = r(i, i).real();
  }
  return r;
}

HermitianMatrix matrix_function(const EigenDecomposition& eig, const std::function<double(double)>& f) {
  std::vector<double> mapped(eig.spectrum.size());
  for (std::size_t j = 0; j < mapped.size(); ++j) {
    mapped[j] = f(eig.spectrum[j]);
    if (!std::isfinite(mapped[j])) {
      std::ostringstream msg;
      msg << "matrix function is not finite at eigenvalue " << eig.spectrum[j];
      throw Error(ErrorCode::DomainError, msg.str());
    }
  }
  return HermitianMatrix(reconstruct(eig.basis, mapped));
}

HermitianMatrix matrix_function(const HermitianMatrix& a, const std::function<double(double)>& f) {
  return matrix_function(hermitian_eigen(a), f);
}

PsdMatrix::PsdMatrix(const HermitianMatrix& h, double psd_tol)
    : inner_(h), eig_(hermitian_eigen(h)) {
  const double lmax = eig_.spectrum.max();
  const double floor = -psd_tol * std::max(1.0, lmax);
  if (eig_.spectrum.min() < floor) {
    std::ostringstream msg;
    msg << "not positive semidefinite: eigenvalue " << eig_.spectrum.min() << " below " << floor;
    throw Error(ErrorCode::NotPsd, msg.str());
  }
  std::vector<double> values(eig_.spectrum.values().begin(), eig_.spectrum.values().end());
  for (double& x : values) {
    if (x < 0.0) {
      x = 0.0;
      ++clamped_;
    }
  }
  if (clamped_ > 0) {
    eig_.spectrum = Spectrum(values);
    inner_ = HermitianMatrix(reconstruct(eig_.basis, values));
  }
}

PsdMatrix psd_power(const PsdMatrix& a, double p) {
  if (!(p > 0.0) || !std::isfinite(p)) {
    std::ostringstream msg;
    msg << "exponent must be positive and finite, got " << p;
    throw Error(ErrorCode::InvalidExponent, msg.str());
  }
  if (p == 1.0) return a;
  // x -> x^p is increasing on [0, inf): spectrum order and basis carry over.
  std::vector<double> powered(a.spectrum().size());
  for (std::size_t j = 0; j < powered.size(); ++j) powered[j] = std::pow(a.spectrum()[j], p);
  for (double x : powered) {
    if (!std::isfinite(x)) throw Error(ErrorCode::DomainError, "matrix power overflowed");
  }
  HermitianMatrix h(reconstruct(a.eigen().basis, powered));
  return PsdMatrix(std::move(h), EigenDecomposition{Spectrum(powered), a.eigen().basis});
}

double trace_power(const PsdMatrix& a, double p) {
  if (!(p > 0.0) || !std::isfinite(p)) {
    std::ostringstream msg;
    msg << "exponent must be positive and finite, got " << p;
    throw Error(ErrorCode::InvalidExponent, msg.str());
  }
  double sum = 0.0;
  for (double x : a.spectrum().values()) sum += p == 1.0 ? x : std::pow(x, p);
  return sum;
}

}  // namespace tracelab
