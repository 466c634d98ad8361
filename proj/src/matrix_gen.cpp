#include "tracelab/matrix_gen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace tracelab {

namespace {

constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

Complex complex_gaussian(SplitMix64& rng) {
  const double re = rng.gaussian();
  const double im = rng.gaussian();
  return Complex(re, im) * (1.0 / std::numbers::sqrt2);
}

/// rows x n matrix of i.i.d. complex Gaussians, row-major.
std::vector<Complex> ginibre(SplitMix64& rng, std::size_t rows, std::size_t n) {
  std::vector<Complex> g(rows * n);
  for (Complex& z : g) z = complex_gaussian(rng);
  return g;
}

/// G*G for a rows x n factor.
DenseMatrix gram(const std::vector<Complex>& g, std::size_t rows, std::size_t n) {
  DenseMatrix a(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Complex sum{};
      for (std::size_t k = 0; k < rows; ++k) sum += std::conj(g[k * n + i]) * g[k * n + j];
      a(i, j) = sum;
    }
  }
  return a;
}

DenseMatrix rescale_to_norm(const DenseMatrix& a, double target) {
  const Spectrum s = hermitian_eigen(HermitianMatrix(a)).spectrum;
  const double norm = std::max(std::abs(s.max()), std::abs(s.min()));
  if (norm == 0.0) return a;
  return Complex(target / norm) * a;
}

}  // namespace

std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::next() noexcept {
  state_ += kGoldenGamma;
  return mix64(state_);
}

double SplitMix64::uniform() noexcept {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double SplitMix64::gaussian() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return mix64(seed ^ mix64(index + kGoldenGamma));
}

const char* generator_kind_name(GeneratorKind kind) noexcept {
  switch (kind) {
    case GeneratorKind::GinibrePsd: return "GinibrePsd";
    case GeneratorKind::DiagonalPsd: return "DiagonalPsd";
    case GeneratorKind::RankDeficientPsd: return "RankDeficientPsd";
    case GeneratorKind::HermitianGue: return "HermitianGue";
    case GeneratorKind::CommutingPsdPair: return "CommutingPsdPair";
    case GeneratorKind::HaarUnitary: return "HaarUnitary";
  }
  return "?";
}

GeneratorKind parse_generator_kind(const std::string& name) {
  static const std::pair<const char*, GeneratorKind> kTable[] = {
      {"ginibre_psd", GeneratorKind::GinibrePsd},
      {"diagonal_psd", GeneratorKind::DiagonalPsd},
      {"rank_deficient_psd", GeneratorKind::RankDeficientPsd},
      {"hermitian_gue", GeneratorKind::HermitianGue},
      {"commuting_psd_pair", GeneratorKind::CommutingPsdPair},
      {"haar_unitary", GeneratorKind::HaarUnitary},
  };
  for (const auto& [snake, kind] : kTable) {
    if (name == snake || name == generator_kind_name(kind)) return kind;
  }
  throw Error(ErrorCode::InvalidParameter, "unknown generator kind '" + name + "'");
}

void GeneratorSpec::validate() const {
  if (n < 1 || n > kMaxDimension) {
    throw Error(ErrorCode::InvalidParameter, "generator dimension must lie in [1, 64]");
  }
  if (kind == GeneratorKind::RankDeficientPsd && rank > n) {
    throw Error(ErrorCode::InvalidParameter, "rank exceeds dimension");
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw Error(ErrorCode::InvalidParameter, "scale must be positive");
  }
}

PsdMatrix random_psd(const GeneratorSpec& spec) {
  spec.validate();
  SplitMix64 rng(spec.seed);
  const std::size_t n = spec.n;
  switch (spec.kind) {
    case GeneratorKind::GinibrePsd:
      return PsdMatrix(rescale_to_norm(gram(ginibre(rng, n, n), n, n), spec.scale));
    case GeneratorKind::DiagonalPsd: {
      std::vector<double> d(n);
      for (double& v : d) v = rng.uniform();
      const double m = *std::max_element(d.begin(), d.end());
      if (m > 0.0) {
        for (double& v : d) v *= spec.scale / m;
      }
      return PsdMatrix(DenseMatrix::diagonal(d));
    }
    case GeneratorKind::RankDeficientPsd:
      if (spec.rank == 0) return PsdMatrix(DenseMatrix(n));
      return PsdMatrix(
          rescale_to_norm(gram(ginibre(rng, spec.rank, n), spec.rank, n), spec.scale));
    default:
      throw Error(ErrorCode::InvalidParameter,
                  std::string("random_psd cannot produce kind ") + generator_kind_name(spec.kind));
  }
}

HermitianMatrix random_hermitian(const GeneratorSpec& spec) {
  spec.validate();
  SplitMix64 rng(spec.seed);
  const std::size_t n = spec.n;
  const DenseMatrix g(n, ginibre(rng, n, n));
  return HermitianMatrix(rescale_to_norm(symmetrize(g), spec.scale));
}

DenseMatrix random_unitary(std::size_t n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  DenseMatrix q(n, ginibre(rng, n, n));
  // Classical Gram-Schmidt with one reorthogonalization pass, column by column.
  // R's diagonal comes out real positive, which is the Haar phase convention.
  for (std::size_t j = 0; j < n; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      std::vector<Complex> proj(j);
      for (std::size_t k = 0; k < j; ++k) {
        Complex dot{};
        for (std::size_t i = 0; i < n; ++i) dot += std::conj(q(i, k)) * q(i, j);
        proj[k] = dot;
      }
      for (std::size_t k = 0; k < j; ++k)
        for (std::size_t i = 0; i < n; ++i) q(i, j) -= proj[k] * q(i, k);
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm += std::norm(q(i, j));
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < n; ++i) q(i, j) /= norm;
  }
  return q;
}

std::pair<PsdMatrix, PsdMatrix> commuting_pair(std::size_t n, std::uint64_t seed) {
  const DenseMatrix u = random_unitary(n, derive_seed(seed, 0));
  SplitMix64 rng(derive_seed(seed, 1));
  std::vector<double> d1(n), d2(n);
  for (double& v : d1) v = rng.uniform();
  for (double& v : d2) v = rng.uniform();
  return {PsdMatrix(reconstruct(u, d1)), PsdMatrix(reconstruct(u, d2))};
}

}  // namespace tracelab
