#include <doctest.h>

#include <cmath>

#include "oracle.hpp"
#include "tracelab/matrix_gen.hpp"
#include "tracelab/trace_inequalities.hpp"

using namespace tracelab;

namespace {

PsdMatrix psd_diag(std::initializer_list<double> d) {
  const std::vector<double> v(d);
  return PsdMatrix(DenseMatrix::diagonal(v));
}

PsdMatrix half_ones() { return PsdMatrix(DenseMatrix::from_rows({{0.5, 0.5}, {0.5, 0.5}})); }

PsdMatrix scalar(double v) { return PsdMatrix(DenseMatrix::from_rows({{v}})); }

PsdMatrix ginibre(std::size_t n, std::uint64_t seed) {
  return random_psd(GeneratorSpec{GeneratorKind::GinibrePsd, n, 0, 1.0, seed});
}

// Closed forms for a real symmetric 2x2 [[a,b],[b,d]].
struct Sym2 {
  double a, b, d;
  double tr() const { return a + d; }
  double det() const { return a * d - b * b; }
  double lam(int sign) const {
    const double h = tr() / 2;
    return h + sign * std::sqrt(h * h - det());
  }
  double tr_sq() const { return tr() * tr() - 2 * det(); }
  double tr_cube() const { return tr() * tr() * tr() - 3 * tr() * det(); }
};

// Hand-expanded products for T = diag(1,2), S = J/2.
constexpr Sym2 kLhs{2.25, 1.25, 5.25};  // T² + ST²S
constexpr Sym2 kRhs{1.5, 1.0, 6.0};     // T² + TS²T

double rel(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace

TEST_CASE("direction_for_exponent") {
  CHECK(direction_for_exponent(1.0) == Direction::Equal);
  CHECK(direction_for_exponent(2.0) == Direction::LhsLeqRhs);
  CHECK(direction_for_exponent(0.5) == Direction::LhsGeqRhs);
  for (double p : {0.0, -1.0}) {
    try {
      direction_for_exponent(p);
      FAIL("expected InvalidExponent");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidExponent);
    }
  }
}

TEST_CASE("make_chain validates shapes") {
  CHECK_THROWS_AS(make_chain({"a"}, {1.0, 2.0}, {ChainRelation::Leq}, 1e-9), Error);
  const ChainReport c = make_chain({"a", "b", "c"}, {1.0, 2.0, 1.5},
                                   {ChainRelation::Leq, ChainRelation::Geq}, 1e-9);
  CHECK(c.holds);
  CHECK(c.adjacent_slacks[0] == 1.0);
  CHECK(c.adjacent_slacks[1] == 0.5);
}

TEST_CASE("problem2_sides examples") {
  const SidePair eq = problem2_sides(psd_diag({1, 1}), psd_diag({1, 1}), 2);
  CHECK(eq.lhs == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(eq.rhs == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(eq.holds);

  const SidePair hand = problem2_sides(psd_diag({1, 2}), half_ones(), 2);
  CHECK(kLhs.tr_sq() == 35.75);
  CHECK(kRhs.tr_sq() == 40.25);
  CHECK(std::abs(hand.lhs - 35.75) <= 1e-12 * 35.75);
  CHECK(std::abs(hand.rhs - 40.25) <= 1e-12 * 40.25);
  CHECK(hand.slack == doctest::Approx(4.5));
  CHECK(hand.expected_direction == Direction::LhsLeqRhs);
  CHECK(hand.holds);

  for (std::uint64_t t = 0; t < 50; ++t) {
    const SidePair one = problem2_sides(ginibre(3, 2 * t), ginibre(3, 2 * t + 1), 1);
    CHECK(one.expected_direction == Direction::Equal);
    CHECK(std::abs(one.slack) <= 1e-10 * std::max({1.0, one.lhs, one.rhs}));
  }
}

TEST_CASE("theorem1_majorization examples") {
  const PsdMatrix t = ginibre(3, 5);
  const MajorizationVerdict zero = theorem1_majorization(t, PsdMatrix(DenseMatrix(3)));
  CHECK(zero.holds);
  for (double s : zero.slacks) CHECK(std::abs(s) < 1e-14);

  const MajorizationVerdict v = theorem1_majorization(psd_diag({1, 2}), half_ones());
  CHECK(v.holds);
  CHECK(std::abs(v.k_sums_lhs[0] - kLhs.lam(+1)) < 1e-12);
  CHECK(std::abs(v.k_sums_rhs[0] - kRhs.lam(+1)) < 1e-12);
  CHECK(std::abs(kLhs.lam(+1) - 5.7025624189766636) < 1e-14);
  CHECK(std::abs(kRhs.lam(+1) - 6.2122144504490262) < 1e-14);
  CHECK(std::abs(v.slacks[0] - (kRhs.lam(+1) - kLhs.lam(+1))) < 1e-12);
  CHECK(v.slacks[0] == doctest::Approx(0.50965).epsilon(1e-4));
  CHECK(std::abs(v.k_sums_lhs[1] - 7.5) < 1e-12);
  CHECK(std::abs(v.k_sums_rhs[1] - 7.5) < 1e-12);
}

TEST_CASE("theorem1_majorization holds on 1000 random pairs with equal totals") {
  for (std::uint64_t t = 0; t < 1000; ++t) {
    const std::size_t n = 2 + t % 7;
    const PsdMatrix a = ginibre(n, derive_seed(1, t)), b = ginibre(n, derive_seed(2, t));
    const MajorizationVerdict v = theorem1_majorization(a, b);
    CHECK(v.holds);
    const DenseMatrix t2 = a.dense() * a.dense();
    const double tl = trace_real(t2 + b.dense() * t2 * b.dense(), 1e-9);
    const double tr = trace_real(t2 + a.dense() * b.dense() * b.dense() * a.dense(), 1e-9);
    CHECK(rel(tl, tr) <= 1e-10);
    CHECK(rel(v.k_sums_lhs.back(), tl) <= 1e-10);
  }
}

TEST_CASE("proof_chain_spectra examples") {
  const ProofChainReport id = proof_chain_spectra(psd_diag({1, 1}), psd_diag({1, 1}), 2);
  CHECK(id.holds);
  CHECK(id.factor_sums[0] == doctest::Approx(4.0));
  CHECK(id.factor_sums[1] == doctest::Approx(4.0));
  for (double term : id.chain.terms) CHECK(term == doctest::Approx(8.0));

  const PsdMatrix t = ginibre(3, 19);
  const ProofChainReport zero = proof_chain_spectra(t, PsdMatrix(DenseMatrix(3)), 2);
  CHECK(zero.holds);
  for (double s : zero.chain.adjacent_slacks) CHECK(std::abs(s) < 1e-14);

  const ProofChainReport hand = proof_chain_spectra(psd_diag({1, 2}), half_ones(), 1);
  CHECK(hand.holds);
  CHECK(std::abs(hand.factor_sums[0] - kRhs.lam(+1)) < 1e-12);
  CHECK(std::abs(hand.factor_sums[1] - kRhs.lam(+1)) < 1e-12);
  CHECK(std::abs(hand.final_slack - 2 * (kRhs.lam(+1) - kLhs.lam(+1))) < 1e-12);
  CHECK(hand.chain.terms.size() == 5);

  CHECK_THROWS_AS(proof_chain_spectra(t, t, 0), Error);
  CHECK_THROWS_AS(proof_chain_spectra(t, t, 4), Error);
}

TEST_CASE("proof_chain_spectra equality lines on random pairs") {
  for (std::uint64_t t = 0; t < 100; ++t) {
    const std::size_t n = 1 + t % 6;
    const PsdMatrix a = ginibre(n, derive_seed(3, t)), b = ginibre(n, derive_seed(4, t));
    for (std::size_t k = 1; k <= n; ++k) {
      const ProofChainReport r = proof_chain_spectra(a, b, k);
      CHECK(r.holds);
      for (std::size_t i = 0; i < 3; ++i) CHECK(r.chain.adjacent_slacks[i] >= -r.chain.tol_used);
      CHECK(r.similarity_residual <= 1e-10 * r.similarity_scale);
      CHECK(r.final_slack >= -r.chain.tol_used);
    }
  }
}

TEST_CASE("p2_elementary_check examples") {
  const P2ElementaryReport eq = p2_elementary_check(psd_diag({1, 1}), psd_diag({1, 1}));
  CHECK(eq.product_route.lhs == 8.0);
  CHECK(eq.product_route.rhs == 8.0);
  CHECK(eq.routes_agree);

  const P2ElementaryReport hand = p2_elementary_check(psd_diag({1, 2}), half_ones());
  CHECK(std::abs(hand.product_route.lhs - 35.75) <= 1e-12 * 35.75);
  CHECK(std::abs(hand.product_route.rhs - 40.25) <= 1e-12 * 40.25);
  CHECK(std::abs(hand.spectral_lhs - 35.75) <= 1e-12 * 35.75);
  CHECK(std::abs(hand.spectral_rhs - 40.25) <= 1e-12 * 40.25);
  CHECK(hand.holds);

  for (std::uint64_t t = 0; t < 200; ++t) {
    const P2ElementaryReport r = p2_elementary_check(ginibre(2 + t % 7, derive_seed(5, t)),
                                                     ginibre(2 + t % 7, derive_seed(6, t)));
    CHECK(r.routes_agree);
    CHECK(rel(r.product_route.lhs, r.spectral_lhs) <= 1e-9);
    CHECK(rel(r.product_route.rhs, r.spectral_rhs) <= 1e-9);
  }
}

TEST_CASE("conjecture1_sides examples") {
  const PsdMatrix y = ginibre(3, 21);
  for (double p : {0.5, 2.0}) {
    const Conjecture1Report r = conjecture1_sides(PsdMatrix(DenseMatrix(3)), y, p);
    const double expect = trace_power(PsdMatrix(DenseMatrix::identity(3) + y.dense()), p);
    CHECK(rel(r.sides.lhs, expect) <= 1e-12);
    CHECK(rel(r.sides.rhs, expect) <= 1e-12);
    CHECK(std::abs(r.sides.slack) <= r.sides.tol_used);
  }

  const Conjecture1Report s = conjecture1_sides(scalar(1), scalar(1), 2);
  CHECK(s.sides.lhs == doctest::Approx(16.0).epsilon(1e-14));
  CHECK(s.sides.rhs == doctest::Approx(16.0).epsilon(1e-14));

  // I+X+Y+YXY = [[2.75,.75],[.75,1.75]]; (I+X)^½(I+Y)(I+X)^½ = [[3,√2/2],[√2/2,1.5]].
  constexpr Sym2 lhs{2.75, 0.75, 1.75};
  const Sym2 rhs{3.0, std::sqrt(0.5), 1.5};
  const Conjecture1Report d = conjecture1_sides(psd_diag({1, 0}), half_ones(), 3);
  CHECK(lhs.tr_cube() == 33.75);
  CHECK(std::abs(rhs.tr_cube() - 37.125) < 1e-12);
  CHECK(rel(d.sides.lhs, 33.75) <= 1e-12);
  CHECK(rel(d.sides.rhs, 37.125) <= 1e-12);
  CHECK(d.sides.slack > 0.0);
  CHECK(d.holds);
  CHECK(d.reformulation_agrees);

  const std::vector<double> el = oracle::eigenvalues(DenseMatrix::from_rows({{2.75, 0.75}, {0.75, 1.75}}));
  CHECK(rel(std::pow(el[0], 3) + std::pow(el[1], 3), d.sides.lhs) <= 1e-10);
}

TEST_CASE("exp_nu examples") {
  const PsdMatrix x = ginibre(3, 31);
  CHECK(exp_nu(x, 1.0).dense() == DenseMatrix::identity(3) + x.dense());
  for (double nu : {1.0, 0.5, 0.1}) {
    CHECK(max_abs_diff(exp_nu(PsdMatrix(DenseMatrix(3)), nu).dense(), DenseMatrix::identity(3)) < 1e-15);
  }
  CHECK(exp_nu(scalar(2), 0.5).dense()(0, 0).real() == doctest::Approx(4.0).epsilon(1e-15));
  for (double nu : {0.0, -0.5, 1.5}) {
    try {
      exp_nu(x, nu);
      FAIL("expected InvalidParameter");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidParameter);
    }
  }
}

TEST_CASE("gt_chain examples") {
  const PsdMatrix y = ginibre(3, 41);
  const GtChainReport z = gt_chain(PsdMatrix(DenseMatrix(3)), y, 0.5);
  const double ty = trace_power(exp_nu(y, 0.5), 1.0);
  for (double t : z.chain.terms) CHECK(rel(t, ty) <= 1e-12);
  CHECK(z.holds);

  const GtChainReport s = gt_chain(scalar(1), scalar(1), 1.0);
  const std::vector<double> expect{3, 4, 4, 4};
  for (std::size_t i = 0; i < 4; ++i) CHECK(s.chain.terms[i] == doctest::Approx(expect[i]).epsilon(1e-14));

  // Each term is Tr[M²] for a hand-expanded 2x2 M = I + ν(·) or the congruent form.
  const GtChainReport h = gt_chain(psd_diag({1, 0}), half_ones(), 0.5);
  const std::vector<double> hand{Sym2{1.75, 0.25, 1.25}.tr_sq(), Sym2{1.8125, 0.3125, 1.3125}.tr_sq(),
                                 Sym2{1.875, 0.25 * std::sqrt(1.5), 1.25}.tr_sq(), 2.25 * 1.625 + 1.625};
  const std::vector<double> frozen{4.75, 5.203125, 5.265625, 5.28125};
  CHECK(h.holds);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(std::abs(hand[i] - frozen[i]) < 1e-14);
    CHECK(rel(h.chain.terms[i], frozen[i]) <= 1e-12);
  }
  for (double sl : h.chain.adjacent_slacks) CHECK(sl >= 0.0);
  CHECK(h.end_to_end_slack == doctest::Approx(0.53125));
}

TEST_CASE("classical_gt_limit_probe examples") {
  const std::vector<double> grid{1, 0.1, 0.01, 0.001};
  const LimitProbeReport z = classical_gt_limit_probe(PsdMatrix(DenseMatrix(2)), ginibre(2, 3), grid);
  for (double d : z.deviations) CHECK(d < 1e-14);

  const std::vector<double> tiny{1e-4};
  const LimitProbeReport s = classical_gt_limit_probe(scalar(1), scalar(1), tiny);
  CHECK(s.deviations[0] <= 2e-4 * std::exp(1.0));
  CHECK(std::abs(s.trace_exp_x - std::exp(1.0)) < 1e-14);
  CHECK(s.classical_gt_slack == doctest::Approx(0.0).epsilon(1e-12));

  const LimitProbeReport r = classical_gt_limit_probe(ginibre(3, 8), ginibre(3, 9), grid);
  CHECK(r.strictly_decreasing);
  CHECK(r.monotone);
  CHECK(r.holds);
  CHECK(r.classical_gt_slack >= -r.tol_used);

  const std::vector<double> bad{0.1, 0.5};
  CHECK_THROWS_AS(classical_gt_limit_probe(scalar(1), scalar(1), bad), Error);
  CHECK_THROWS_AS(classical_gt_limit_probe(scalar(1), scalar(1), std::vector<double>{}), Error);
  CHECK_THROWS_AS(classical_gt_limit_probe(scalar(1), scalar(1), std::vector<double>{2.0}), Error);
}

TEST_CASE("both exponent directions hold on the same pair") {
  for (std::uint64_t t = 0; t < 200; ++t) {
    const std::size_t n = 2 + t % 5;
    const PsdMatrix a = ginibre(n, derive_seed(7, t)), b = ginibre(n, derive_seed(8, t));
    const bool maj = theorem1_majorization(a, b).holds;
    CHECK(maj);
    for (double p : {0.25, 0.5, 2.0, 3.0, 5.0}) {
      const SidePair s = problem2_sides(a, b, p);
      CHECK(s.holds);
    }
  }
}

TEST_CASE("commuting pairs give equality for every exponent") {
  for (std::uint64_t t = 0; t < 50; ++t) {
    const auto [a, b] = commuting_pair(1 + t % 6, t);
    for (double p : {0.25, 0.5, 1.0, 2.0, 3.0}) {
      const SidePair s = problem2_sides(a, b, p);
      CHECK(std::abs(s.lhs - s.rhs) <= s.tol_used);
    }
  }
}

TEST_CASE("sides are invariant under simultaneous unitary conjugation") {
  for (std::uint64_t t = 0; t < 50; ++t) {
    const std::size_t n = 2 + t % 5;
    const PsdMatrix a = ginibre(n, derive_seed(9, t)), b = ginibre(n, derive_seed(10, t));
    const DenseMatrix u = random_unitary(n, derive_seed(11, t));
    const PsdMatrix ua(u * a.dense() * adjoint(u)), ub(u * b.dense() * adjoint(u));
    for (double p : {0.5, 2.0, 3.0}) {
      const SidePair s0 = problem2_sides(a, b, p), s1 = problem2_sides(ua, ub, p);
      CHECK(std::abs(s0.lhs - s1.lhs) <= s0.tol_used);
      CHECK(std::abs(s0.rhs - s1.rhs) <= s0.tol_used);
    }
  }
}

TEST_CASE("conjecture1_sides matches the substituted problem2 sides") {
  for (std::uint64_t t = 0; t < 100; ++t) {
    const std::size_t n = 1 + t % 6;
    const PsdMatrix x = ginibre(n, derive_seed(12, t)), y = ginibre(n, derive_seed(13, t));
    for (double p : {0.5, 2.0}) {
      const Conjecture1Report r = conjecture1_sides(x, y, p);
      const SidePair s = problem2_sides(psd_power(PsdMatrix(DenseMatrix::identity(n) + x.dense()), 0.5),
                                        psd_power(y, 0.5), p);
      CHECK(rel(r.sides.lhs, s.lhs) <= 1e-9);
      CHECK(rel(r.sides.rhs, s.rhs) <= 1e-9);
      CHECK(r.holds);
    }
  }
}

TEST_CASE("gt_chain holds on random pairs") {
  for (std::uint64_t t = 0; t < 100; ++t) {
    const std::size_t n = 1 + t % 6;
    const PsdMatrix x = ginibre(n, derive_seed(14, t)), y = ginibre(n, derive_seed(15, t));
    for (double nu : {1.0, 0.5, 0.25, 0.1}) {
      const GtChainReport r = gt_chain(x, y, nu);
      CHECK(r.holds);
      CHECK(r.end_to_end_slack >= -r.chain.tol_used);
    }
  }
}
