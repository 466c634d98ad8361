#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>

#include "tracelab/linalg.hpp"

namespace tracelab {

/// SplitMix64 with its published constants.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept;
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Standard normal via Box-Muller; the second variate of each pair is cached.
  double gaussian() noexcept;

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// SplitMix64 output function applied to a single word.
std::uint64_t mix64(std::uint64_t z) noexcept;

/// Per-trial seed: mix64(seed ^ mix64(index + golden gamma)).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

enum class GeneratorKind {
  GinibrePsd,
  DiagonalPsd,
  RankDeficientPsd,
  HermitianGue,
  CommutingPsdPair,
  HaarUnitary,
};

const char* generator_kind_name(GeneratorKind kind) noexcept;
/// Accepts the enum spelling ("GinibrePsd") or snake case ("ginibre_psd").
GeneratorKind parse_generator_kind(const std::string& name);

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::GinibrePsd;
  std::size_t n = 2;
  /// Only read for RankDeficientPsd.
  std::size_t rank = 0;
  /// Target spectral norm.
  double scale = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// GinibrePsd: G*G rescaled to spectral norm `scale`. DiagonalPsd: uniform
/// diagonal rescaled the same way. RankDeficientPsd: G*G with G of shape rank x n.
PsdMatrix random_psd(const GeneratorSpec& spec);

/// (G + G*)/2 rescaled so that max |eigenvalue| = scale.
HermitianMatrix random_hermitian(const GeneratorSpec& spec);

/// Haar unitary from Gram-Schmidt QR of a complex Ginibre matrix (positive R diagonal).
DenseMatrix random_unitary(std::size_t n, std::uint64_t seed);

/// U D1 U*, U D2 U* with a shared Haar U and independent uniform [0, 1) diagonals.
std::pair<PsdMatrix, PsdMatrix> commuting_pair(std::size_t n, std::uint64_t seed);

}  // namespace tracelab
