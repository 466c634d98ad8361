#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

#include "tracelab/error.hpp"

namespace tracelab {

using Complex = std::complex<double>;

inline constexpr std::size_t kMaxDimension = 64;

// Scale-relative tolerances; each is multiplied by max(1, norm) at the point of use.
inline constexpr double kHermTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kEigTol = 1e-12;
inline constexpr double kTraceTol = 1e-9;
inline constexpr int kMaxJacobiSweeps = 64;

/// Square complex matrix, dense row-major. Every entry is finite.
class DenseMatrix {
 public:
  /// n x n zero matrix.
  explicit DenseMatrix(std::size_t n);
  DenseMatrix(std::size_t n, std::vector<Complex> entries);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix diagonal(std::span<const double> diag);
  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);

  std::size_t n() const noexcept { return n_; }
  const Complex& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_ + j]; }
  Complex& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }
  std::span<const Complex> entries() const noexcept { return data_; }

  bool operator==(const DenseMatrix&) const = default;

 private:
  std::size_t n_;
  std::vector<Complex> data_;
};

DenseMatrix adjoint(const DenseMatrix& a);
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator*(Complex s, const DenseMatrix& a);
inline DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) { return matmul(a, b); }

double frobenius_norm(const DenseMatrix& a);
/// Largest entrywise modulus of a - b.
double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);
/// (A + A*) / 2.
DenseMatrix symmetrize(const DenseMatrix& a);

/// Real part of the trace. Throws NonRealTrace when the imaginary part exceeds
/// trace_tol * max(1, ||A||_F).
double trace_real(const DenseMatrix& a, double trace_tol = kTraceTol);

void require_same_dimension(const DenseMatrix& a, const DenseMatrix& b);

/// Hermitian matrix; stored exactly symmetrized.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(const DenseMatrix& a, double herm_tol = kHermTol);

  std::size_t n() const noexcept { return inner_.n(); }
  const DenseMatrix& dense() const noexcept { return inner_; }

 private:
  DenseMatrix inner_;
};

/// Eigenvalues in decreasing order.
class Spectrum {
 public:
  Spectrum() = default;
  /// Sorts a copy of the values in decreasing order.
  explicit Spectrum(std::vector<double> values);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t j) const noexcept { return values_[j]; }
  double max() const noexcept { return values_.front(); }
  double min() const noexcept { return values_.back(); }

 private:
  std::vector<double> values_;
};

struct EigenDecomposition {
  Spectrum spectrum;
  DenseMatrix basis;  // columns are eigenvectors, in spectrum order
};

/// Cyclic complex Jacobi. Deterministic; ties keep solver order.
/// Throws ConvergenceFailure if the off-diagonal mass is not below
/// eig_tol * ||A||_F after max_sweeps.
EigenDecomposition hermitian_eigen(const HermitianMatrix& a, double eig_tol = kEigTol,
                                   int max_sweeps = kMaxJacobiSweeps);

/// U diag(values) U* for an orthonormal basis, symmetrized.
DenseMatrix reconstruct(const DenseMatrix& basis, std::span<const double> values);

HermitianMatrix matrix_function(const HermitianMatrix& a, const std::function<double(double)>& f);
HermitianMatrix matrix_function(const EigenDecomposition& eig, const std::function<double(double)>& f);

/// Positive semidefinite matrix. Eigenvalues in [-psd_tol * max(1, lambda_max), 0)
/// are clamped to zero; anything more negative is rejected with NotPsd.
/// The decomposition computed during validation is retained.
class PsdMatrix {
 public:
  explicit PsdMatrix(const HermitianMatrix& h, double psd_tol = kPsdTol);
  explicit PsdMatrix(const DenseMatrix& a, double psd_tol = kPsdTol)
      : PsdMatrix(HermitianMatrix(a), psd_tol) {}

  std::size_t n() const noexcept { return inner_.n(); }
  const HermitianMatrix& hermitian() const noexcept { return inner_; }
  const DenseMatrix& dense() const noexcept { return inner_.dense(); }
  const EigenDecomposition& eigen() const noexcept { return eig_; }
  const Spectrum& spectrum() const noexcept { return eig_.spectrum; }
  /// Number of eigenvalues that were clamped to zero at construction.
  std::size_t clamped_count() const noexcept { return clamped_; }

 private:
  PsdMatrix(HermitianMatrix h, EigenDecomposition eig) : inner_(std::move(h)), eig_(std::move(eig)) {}
  friend PsdMatrix psd_power(const PsdMatrix&, double);

  HermitianMatrix inner_;
  EigenDecomposition eig_;
  std::size_t clamped_ = 0;
};

/// A^p on the clamped spectrum. p must be > 0; p == 1 returns A unchanged.
PsdMatrix psd_power(const PsdMatrix& a, double p);

/// Tr[A^p] evaluated on the stored spectrum, p > 0.
double trace_power(const PsdMatrix& a, double p);

}  // namespace tracelab
