#include <doctest.h>

#include <cmath>

#include "oracle.hpp"
#include "tracelab/linalg.hpp"
#include "tracelab/matrix_gen.hpp"

using namespace tracelab;

namespace {

constexpr Complex I1{0.0, 1.0};

DenseMatrix random_complex(std::size_t n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<Complex> e(n * n);
  for (Complex& z : e) z = Complex(rng.gaussian(), rng.gaussian());
  return DenseMatrix(n, std::move(e));
}

HermitianMatrix random_herm(std::size_t n, std::uint64_t seed) {
  return HermitianMatrix(symmetrize(random_complex(n, seed)));
}

PsdMatrix random_psd_of(std::size_t n, std::uint64_t seed) {
  const DenseMatrix g = random_complex(n, seed);
  return PsdMatrix(adjoint(g) * g);
}

double max_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("adjoint examples") {
  CHECK(adjoint(DenseMatrix::from_rows({{I1}})) == DenseMatrix::from_rows({{-I1}}));
  CHECK(adjoint(DenseMatrix::identity(2)) == DenseMatrix::identity(2));
  CHECK(adjoint(DenseMatrix::from_rows({{0, 1}, {0, 0}})) == DenseMatrix::from_rows({{0, 0}, {1, 0}}));
}

TEST_CASE("matmul examples") {
  const DenseMatrix a = random_complex(3, 11);
  CHECK(max_abs_diff(a * DenseMatrix::identity(3), a) == 0.0);
  const double d12[] = {1, 2}, d34[] = {3, 4}, d38[] = {3, 8};
  CHECK(DenseMatrix::diagonal(d12) * DenseMatrix::diagonal(d34) == DenseMatrix::diagonal(d38));
  CHECK(DenseMatrix::from_rows({{0, 1}, {0, 0}}) * DenseMatrix::from_rows({{0, 0}, {1, 0}}) ==
        DenseMatrix::from_rows({{1, 0}, {0, 0}}));
  CHECK_THROWS_AS(matmul(DenseMatrix(2), DenseMatrix(3)), Error);
}

TEST_CASE("trace_real examples and NonRealTrace") {
  CHECK(trace_real(DenseMatrix::identity(3)) == 3.0);
  CHECK(trace_real(DenseMatrix::from_rows({{1, 0}, {0, 2}})) == 3.0);
  CHECK(trace_real(DenseMatrix::from_rows({{0, 1}, {1, 0}})) == 0.0);
  try {
    trace_real(DenseMatrix::from_rows({{I1, 0}, {0, 1}}));
    FAIL("expected NonRealTrace");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonRealTrace);
  }
}

TEST_CASE("DenseMatrix rejects non-finite entries and bad sizes") {
  CHECK_THROWS_AS(DenseMatrix(2, {1, 2, 3}), Error);
  CHECK_THROWS_AS(DenseMatrix(1, {Complex(NAN, 0)}), Error);
  CHECK_THROWS_AS(DenseMatrix(65), Error);
  CHECK_THROWS_AS(DenseMatrix(0), Error);
}

TEST_CASE("HermitianMatrix validates and symmetrizes") {
  try {
    HermitianMatrix h(DenseMatrix::from_rows({{0, 1}, {0, 0}}));
    FAIL("expected NotHermitian");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotHermitian);
    CHECK(std::string(e.what()).find("worst entry") != std::string::npos);
  }
  const HermitianMatrix h(DenseMatrix::from_rows({{1, Complex(2, 1e-13)}, {Complex(2, 0), 3}}));
  CHECK(h.dense()(0, 1) == std::conj(h.dense()(1, 0)));
}

TEST_CASE("hermitian_eigen analytic 2x2 spectra") {
  const auto spec = [](DenseMatrix m) { return hermitian_eigen(HermitianMatrix(m)).spectrum; };
  const Spectrum a = spec(DenseMatrix::from_rows({{1, 0}, {0, 3}}));
  CHECK(a[0] == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(a[1] == doctest::Approx(1.0).epsilon(1e-15));
  const Spectrum b = spec(DenseMatrix::from_rows({{0, 1}, {1, 0}}));
  CHECK(std::abs(b[0] - 1.0) < 1e-14);
  CHECK(std::abs(b[1] + 1.0) < 1e-14);
  const Spectrum c = spec(DenseMatrix::from_rows({{2, I1}, {-I1, 2}}));
  CHECK(std::abs(c[0] - 3.0) < 1e-14);
  CHECK(std::abs(c[1] - 1.0) < 1e-14);
}

TEST_CASE("hermitian_eigen reconstruction and unitarity on 200 random inputs") {
  for (std::uint64_t t = 0; t < 200; ++t) {
    const std::size_t n = 1 + t % 16;
    const HermitianMatrix a = random_herm(n, 1000 + t);
    const EigenDecomposition e = hermitian_eigen(a);
    const DenseMatrix& u = e.basis;
    const double scale = std::max(1.0, frobenius_norm(a.dense()));
    CHECK(frobenius_norm(a.dense() - reconstruct(u, e.spectrum.values())) <= 1e-12 * scale);
    CHECK(frobenius_norm(adjoint(u) * u - DenseMatrix::identity(n)) <= 1e-12 * static_cast<double>(n));
    for (std::size_t j = 0; j + 1 < n; ++j) CHECK(e.spectrum[j] >= e.spectrum[j + 1]);
  }
}

TEST_CASE("hermitian_eigen agrees with the characteristic-polynomial oracle") {
  for (std::uint64_t t = 0; t < 50; ++t) {
    const std::size_t n = 1 + t % 4;
    const HermitianMatrix a = random_herm(n, 77 + t);
    const std::vector<double> ref = oracle::eigenvalues(a.dense());
    CHECK(max_diff(hermitian_eigen(a).spectrum.values(), ref) < 1e-9);
  }
}

TEST_CASE("hermitian_eigen is deterministic and reports non-convergence") {
  const HermitianMatrix a = random_herm(6, 5);
  const EigenDecomposition e1 = hermitian_eigen(a);
  const EigenDecomposition e2 = hermitian_eigen(a);
  CHECK(e1.basis == e2.basis);
  CHECK(max_diff(e1.spectrum.values(), e2.spectrum.values()) == 0.0);
  try {
    hermitian_eigen(a, kEigTol, 0);
    FAIL("expected ConvergenceFailure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConvergenceFailure);
  }
}

TEST_CASE("ties keep solver order") {
  const EigenDecomposition e = hermitian_eigen(HermitianMatrix(DenseMatrix::identity(3)));
  CHECK(e.basis == DenseMatrix::identity(3));
}

TEST_CASE("spectra of X X* and X* X agree") {
  for (std::uint64_t t = 0; t < 200; ++t) {
    const std::size_t n = 1 + t % 8;
    const DenseMatrix x = random_complex(n, 4000 + t);
    const Spectrum a = hermitian_eigen(HermitianMatrix(x * adjoint(x))).spectrum;
    const Spectrum b = hermitian_eigen(HermitianMatrix(adjoint(x) * x)).spectrum;
    const double f = frobenius_norm(x);
    CHECK(max_diff(a.values(), b.values()) <= 1e-10 * std::max(1.0, f * f));
  }
}

TEST_CASE("trace cyclicity") {
  for (std::uint64_t t = 0; t < 100; ++t) {
    const std::size_t n = 1 + t % 8;
    const DenseMatrix a = random_complex(n, 9000 + t);
    const DenseMatrix b = random_complex(n, 9500 + t);
    Complex ab{}, ba{};
    const DenseMatrix m1 = a * b, m2 = b * a;
    for (std::size_t i = 0; i < n; ++i) {
      ab += m1(i, i);
      ba += m2(i, i);
    }
    CHECK(std::abs(ab - ba) <= 1e-12 * std::max(1.0, frobenius_norm(a) * frobenius_norm(b)));
  }
}

TEST_CASE("matrix_function examples") {
  const auto sqrt_fn = [](double x) { return std::sqrt(x); };
  const double d49[] = {4, 9}, d23[] = {2, 3};
  const HermitianMatrix r1 = matrix_function(HermitianMatrix(DenseMatrix::diagonal(d49)), sqrt_fn);
  CHECK(max_abs_diff(r1.dense(), DenseMatrix::diagonal(d23)) < 1e-14);

  const HermitianMatrix r2 = matrix_function(HermitianMatrix(DenseMatrix::from_rows({{0, 1}, {1, 0}})),
                                             [](double x) { return x * x; });
  CHECK(max_abs_diff(r2.dense(), DenseMatrix::identity(2)) < 1e-14);

  const HermitianMatrix r3 = matrix_function(HermitianMatrix(DenseMatrix::from_rows({{2, 1}, {1, 2}})), sqrt_fn);
  const double s3 = std::sqrt(3.0);
  const DenseMatrix expect = DenseMatrix::from_rows({{(s3 + 1) / 2, (s3 - 1) / 2}, {(s3 - 1) / 2, (s3 + 1) / 2}});
  CHECK(max_abs_diff(r3.dense(), expect) < 1e-14);

  CHECK_THROWS_AS(matrix_function(HermitianMatrix(DenseMatrix::from_rows({{-1, 0}, {0, 1}})), sqrt_fn), Error);
}

TEST_CASE("matrix_function with identity returns the input") {
  for (std::uint64_t t = 0; t < 50; ++t) {
    const HermitianMatrix a = random_herm(1 + t % 10, 300 + t);
    const HermitianMatrix r = matrix_function(a, [](double x) { return x; });
    CHECK(frobenius_norm(r.dense() - a.dense()) <= 1e-12 * std::max(1.0, frobenius_norm(a.dense())));
  }
}

TEST_CASE("PsdMatrix clamps tiny negatives and rejects real ones") {
  const double tiny[] = {1.0, -1e-12};
  const PsdMatrix p(DenseMatrix::diagonal(tiny));
  CHECK(p.clamped_count() == 1);
  CHECK(p.spectrum().min() == 0.0);
  CHECK(p.dense()(1, 1) == 0.0);

  const double bad[] = {1.0, -1.0};
  try {
    PsdMatrix q(DenseMatrix::diagonal(bad));
    FAIL("expected NotPsd");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotPsd);
  }
}

TEST_CASE("psd_power examples") {
  CHECK(max_abs_diff(psd_power(PsdMatrix(DenseMatrix::identity(2)), 5).dense(), DenseMatrix::identity(2)) < 1e-15);
  const double d40[] = {4, 0}, d20[] = {2, 0}, d23[] = {2, 3}, d49[] = {4, 9};
  CHECK(max_abs_diff(psd_power(PsdMatrix(DenseMatrix::diagonal(d40)), 0.5).dense(), DenseMatrix::diagonal(d20)) < 1e-15);
  CHECK(max_abs_diff(psd_power(PsdMatrix(DenseMatrix::diagonal(d23)), 2).dense(), DenseMatrix::diagonal(d49)) < 1e-14);

  for (double p : {0.0, -1.0, std::nan("")}) {
    try {
      psd_power(PsdMatrix(DenseMatrix::identity(2)), p);
      FAIL("expected InvalidExponent");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidExponent);
    }
  }
}

TEST_CASE("psd_power round trip") {
  for (std::uint64_t t = 0; t < 60; ++t) {
    const PsdMatrix a = random_psd_of(1 + t % 8, 600 + t);
    for (double p : {2.0, 3.0, 0.5}) {
      const PsdMatrix back = psd_power(psd_power(a, p), 1.0 / p);
      CHECK(frobenius_norm(back.dense() - a.dense()) <= 1e-9 * std::max(1.0, frobenius_norm(a.dense())));
    }
  }
}

TEST_CASE("trace_power matches the trace of psd_power") {
  const PsdMatrix a = random_psd_of(5, 42);
  for (double p : {0.25, 1.0, 2.5}) {
    CHECK(trace_power(a, p) == doctest::Approx(trace_real(psd_power(a, p).dense())).epsilon(1e-12));
  }
}
