#include "tracelab/trace_inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tracelab {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_positive_tol(double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidParameter, "tolerance must be positive");
}

void require_nu(double nu) {
  if (!(nu > 0.0 && nu <= 1.0)) {
    std::ostringstream msg;
    msg << "nu must lie in (0, 1], got " << nu;
    throw Error(ErrorCode::InvalidParameter, msg.str());
  }
}

struct Problem2Matrices {
  PsdMatrix lhs;  // T² + ST²S
  PsdMatrix rhs;  // T² + TS²T
};

Problem2Matrices problem2_matrices(const PsdMatrix& t, const PsdMatrix& s) {
  require_same_dimension(t.dense(), s.dense());
  const DenseMatrix& T = t.dense();
  const DenseMatrix& S = s.dense();
  const DenseMatrix t2 = T * T;
  return Problem2Matrices{PsdMatrix(t2 + S * t2 * S), PsdMatrix(t2 + T * (S * S) * T)};
}

double ky_fan(const DenseMatrix& m, std::size_t k) { return ky_fan_sum(HermitianMatrix(m), k); }

double max_spectrum_gap(const DenseMatrix& a, const DenseMatrix& b) {
  const Spectrum sa = hermitian_eigen(HermitianMatrix(a)).spectrum;
  const Spectrum sb = hermitian_eigen(HermitianMatrix(b)).spectrum;
  double gap = 0.0;
  for (std::size_t j = 0; j < sa.size(); ++j) gap = std::max(gap, std::abs(sa[j] - sb[j]));
  return gap;
}

}  // namespace

const char* direction_name(Direction d) noexcept {
  switch (d) {
    case Direction::LhsLeqRhs: return "lhs<=rhs";
    case Direction::LhsGeqRhs: return "lhs>=rhs";
    case Direction::Equal: return "lhs==rhs";
  }
  return "?";
}

Direction direction_for_exponent(double p) {
  if (!(p > 0.0) || !std::isfinite(p)) {
    std::ostringstream msg;
    msg << "exponent must be positive and finite, got " << p;
    throw Error(ErrorCode::InvalidExponent, msg.str());
  }
  if (p == 1.0) return Direction::Equal;
  return p > 1.0 ? Direction::LhsLeqRhs : Direction::LhsGeqRhs;
}

SidePair make_side_pair(double lhs, double rhs, Direction direction, double p_or_nu, double tol) {
  require_positive_tol(tol);
  SidePair sp;
  sp.lhs = lhs;
  sp.rhs = rhs;
  sp.expected_direction = direction;
  sp.p_or_nu = p_or_nu;
  sp.tol_used = tol * std::max({1.0, std::abs(lhs), std::abs(rhs)});
  switch (direction) {
    case Direction::LhsLeqRhs: sp.slack = rhs - lhs; break;
    case Direction::LhsGeqRhs: sp.slack = lhs - rhs; break;
    case Direction::Equal: sp.slack = -std::abs(lhs - rhs); break;
  }
  sp.holds = sp.slack >= -sp.tol_used;
  return sp;
}

double ChainReport::min_slack() const {
  return adjacent_slacks.empty() ? 0.0
                                 : *std::min_element(adjacent_slacks.begin(), adjacent_slacks.end());
}

ChainReport make_chain(std::vector<std::string> labels, std::vector<double> terms,
                       std::vector<ChainRelation> relations, double tol) {
  require_positive_tol(tol);
  if (labels.size() != terms.size() || relations.size() + 1 != terms.size()) {
    throw Error(ErrorCode::InvalidArgument, "chain needs one label per term and one relation per step");
  }
  ChainReport c;
  double scale = 1.0;
  for (double t : terms) scale = std::max(scale, std::abs(t));
  c.tol_used = tol * scale;
  c.adjacent_slacks.resize(relations.size());
  for (std::size_t i = 0; i < relations.size(); ++i) {
    const double a = terms[i];
    const double b = terms[i + 1];
    switch (relations[i]) {
      case ChainRelation::Leq: c.adjacent_slacks[i] = b - a; break;
      case ChainRelation::Geq: c.adjacent_slacks[i] = a - b; break;
      case ChainRelation::Equal: c.adjacent_slacks[i] = -std::abs(a - b); break;
    }
  }
  c.holds = std::all_of(c.adjacent_slacks.begin(), c.adjacent_slacks.end(),
                        [&](double s) { return s >= -c.tol_used; });
  c.labels = std::move(labels);
  c.terms = std::move(terms);
  c.relations = std::move(relations);
  return c;
}

SidePair problem2_sides(const PsdMatrix& t, const PsdMatrix& s, double p, double tol) {
  const Direction direction = direction_for_exponent(p);
  const Problem2Matrices m = problem2_matrices(t, s);
  return make_side_pair(trace_power(m.lhs, p), trace_power(m.rhs, p), direction, p, tol);
}

MajorizationVerdict theorem1_majorization(const PsdMatrix& t, const PsdMatrix& s, double tol) {
  const Problem2Matrices m = problem2_matrices(t, s);
  return check_majorization(m.lhs.spectrum().values(), m.rhs.spectrum().values(), tol);
}

double ProofChainReport::min_slack() const {
  return std::min({chain.min_slack(), -factor_residual, -expansion_residual});
}

ProofChainReport proof_chain_spectra(const PsdMatrix& t, const PsdMatrix& s, std::size_t k,
                                     double tol) {
  require_same_dimension(t.dense(), s.dense());
  require_positive_tol(tol);
  if (k < 1 || k > t.n()) {
    std::ostringstream msg;
    msg << "k = " << k << " outside [1, " << t.n() << "]";
    throw Error(ErrorCode::InvalidArgument, msg.str());
  }
  const DenseMatrix& T = t.dense();
  const DenseMatrix& S = s.dense();
  const DenseMatrix t2 = T * T;
  const DenseMatrix ts = T * S;
  const DenseMatrix st = S * T;

  const DenseMatrix plus = T + kI * ts;        // T + iTS
  const DenseMatrix plus_adj = T - kI * st;    // T - iST = (T + iTS)*
  const DenseMatrix minus = T - kI * ts;       // T - iTS
  const DenseMatrix minus_adj = T + kI * st;   // T + iST = (T - iTS)*

  const DenseMatrix rhs_matrix = t2 + T * (S * S) * T;   // T² + TS²T
  const DenseMatrix x = t2 + S * t2 * S;                  // T² + ST²S
  const DenseMatrix y = kI * (t2 * S - S * t2);           // i(T²S - ST²)

  const DenseMatrix zz1 = plus * plus_adj;
  const DenseMatrix zz2 = minus * minus_adj;
  const DenseMatrix z1z = plus_adj * plus;
  const DenseMatrix z2z = minus_adj * minus;

  ProofChainReport r;
  r.k = k;
  const double kf_rhs = ky_fan(rhs_matrix, k);
  r.factor_sums = {ky_fan(zz1, k), ky_fan(zz2, k)};
  const double kf_swapped = ky_fan(z1z, k) + ky_fan(z2z, k);
  const double kf_split = ky_fan(x + y, k) + ky_fan(x - y, k);
  const double kf_x = ky_fan(x, k);

  r.chain = make_chain(
      {"2*kf(T^2+TS^2T)", "kf((T+iTS)(T-iST))+kf((T-iTS)(T+iST))",
       "kf((T-iST)(T+iTS))+kf((T+iST)(T-iTS))", "kf(X+Y)+kf(X-Y)", "2*kf(X)"},
      {2.0 * kf_rhs, r.factor_sums[0] + r.factor_sums[1], kf_swapped, kf_split, 2.0 * kf_x},
      {ChainRelation::Equal, ChainRelation::Equal, ChainRelation::Equal, ChainRelation::Geq}, tol);

  r.factor_residual = std::max(std::abs(r.factor_sums[0] - kf_rhs), std::abs(r.factor_sums[1] - kf_rhs));
  r.similarity_residual = std::max(max_spectrum_gap(zz1, z1z), max_spectrum_gap(zz2, z2z));
  const double n1 = frobenius_norm(plus);
  const double n2 = frobenius_norm(minus);
  r.similarity_scale = std::max({1.0, n1 * n1, n2 * n2});
  r.expansion_residual =
      std::max(frobenius_norm(z1z - (x + y)), frobenius_norm(z2z - (x - y)));
  r.final_slack = 2.0 * kf_rhs - 2.0 * kf_x;
  r.holds = r.chain.holds && r.factor_residual <= r.chain.tol_used &&
            r.expansion_residual <= r.chain.tol_used &&
            r.similarity_residual <= tol * r.similarity_scale;
  return r;
}

P2ElementaryReport p2_elementary_check(const PsdMatrix& t, const PsdMatrix& s, double tol) {
  require_same_dimension(t.dense(), s.dense());
  const DenseMatrix& T = t.dense();
  const DenseMatrix& S = s.dense();
  const DenseMatrix t2 = T * T;
  const DenseMatrix lhs_m = symmetrize(t2 + S * t2 * S);
  const DenseMatrix rhs_m = symmetrize(t2 + T * (S * S) * T);

  P2ElementaryReport r;
  r.product_route = make_side_pair(trace_real(lhs_m * lhs_m), trace_real(rhs_m * rhs_m),
                                   Direction::LhsLeqRhs, 2.0, tol);
  const SidePair spectral = problem2_sides(t, s, 2.0, tol);
  r.spectral_lhs = spectral.lhs;
  r.spectral_rhs = spectral.rhs;
  r.route_residual = std::max(std::abs(r.product_route.lhs - spectral.lhs),
                              std::abs(r.product_route.rhs - spectral.rhs));
  r.routes_agree = r.route_residual <= r.product_route.tol_used;
  r.holds = r.routes_agree && r.product_route.holds;
  return r;
}

Conjecture1Report conjecture1_sides(const PsdMatrix& x, const PsdMatrix& y, double p, double tol) {
  require_same_dimension(x.dense(), y.dense());
  const Direction direction = direction_for_exponent(p);
  const DenseMatrix id = DenseMatrix::identity(x.n());
  const DenseMatrix& X = x.dense();
  const DenseMatrix& Y = y.dense();

  const PsdMatrix y_half = psd_power(y, 0.5);
  const PsdMatrix i_plus_x_half = psd_power(PsdMatrix(id + X), 0.5);
  const DenseMatrix& Yh = y_half.dense();
  const DenseMatrix& Th = i_plus_x_half.dense();

  const PsdMatrix lhs_m(id + X + Y + Yh * X * Yh);
  // (I+X)(I+Y) is not Hermitian; its congruent form has the same spectrum.
  const PsdMatrix rhs_m(Th * (id + Y) * Th);

  Conjecture1Report r;
  r.sides = make_side_pair(trace_power(lhs_m, p), trace_power(rhs_m, p), direction, p, tol);
  const SidePair reformulated = problem2_sides(i_plus_x_half, y_half, p, tol);
  r.reformulated_lhs = reformulated.lhs;
  r.reformulated_rhs = reformulated.rhs;
  r.reformulation_residual = std::max(std::abs(r.sides.lhs - reformulated.lhs),
                                      std::abs(r.sides.rhs - reformulated.rhs));
  r.reformulation_agrees = r.reformulation_residual <= r.sides.tol_used;
  r.holds = r.sides.holds && r.reformulation_agrees;
  return r;
}

PsdMatrix exp_nu(const PsdMatrix& x, double nu) {
  require_nu(nu);
  const DenseMatrix id = DenseMatrix::identity(x.n());
  return psd_power(PsdMatrix(id + Complex(nu) * x.dense()), 1.0 / nu);
}

GtChainReport gt_chain(const PsdMatrix& x, const PsdMatrix& y, double nu, double tol) {
  require_nu(nu);
  require_same_dimension(x.dense(), y.dense());
  const DenseMatrix id = DenseMatrix::identity(x.n());
  const DenseMatrix& X = x.dense();
  const DenseMatrix& Y = y.dense();
  const Complex v = nu;
  const double p = 1.0 / nu;

  const DenseMatrix yh = psd_power(y, 0.5).dense();
  const DenseMatrix xh = psd_power(PsdMatrix(id + v * X), 0.5).dense();

  const double t1 = trace_power(PsdMatrix(id + v * (X + Y)), p);
  const double t2 = trace_power(PsdMatrix(id + v * (X + Y + v * (yh * X * yh))), p);
  const double t3 = trace_power(PsdMatrix(xh * (id + v * Y) * xh), p);
  const double t4 = trace_real(exp_nu(x, nu).dense() * exp_nu(y, nu).dense());

  GtChainReport r;
  r.nu = nu;
  r.chain = make_chain({"Tr[exp_nu(X+Y)]", "Tr[exp_nu(X+Y+nu*Y^1/2XY^1/2)]", "Tr[exp_nu(X+Y+nu*XY)]",
                        "Tr[exp_nu(X)exp_nu(Y)]"},
                       {t1, t2, t3, t4},
                       {ChainRelation::Leq, ChainRelation::Leq, ChainRelation::Leq}, tol);
  r.end_to_end_slack = t4 - t1;
  r.holds = r.chain.holds && r.end_to_end_slack >= -r.chain.tol_used;
  return r;
}

double LimitProbeReport::min_slack() const {
  double m = classical_gt_slack;
  for (double s : gt_end_to_end_slacks) m = std::min(m, s);
  for (std::size_t i = 0; i + 1 < deviations.size(); ++i) m = std::min(m, deviations[i] - deviations[i + 1]);
  return m;
}

LimitProbeReport classical_gt_limit_probe(const PsdMatrix& x, const PsdMatrix& y,
                                          std::span<const double> nu_grid, double tol) {
  require_same_dimension(x.dense(), y.dense());
  require_positive_tol(tol);
  if (nu_grid.empty()) throw Error(ErrorCode::InvalidParameter, "nu grid is empty");
  for (std::size_t i = 0; i < nu_grid.size(); ++i) {
    require_nu(nu_grid[i]);
    if (i > 0 && !(nu_grid[i] < nu_grid[i - 1])) {
      throw Error(ErrorCode::InvalidParameter, "nu grid must be strictly decreasing");
    }
  }
  const auto exp_fn = [](double v) { return std::exp(v); };
  const HermitianMatrix ex = matrix_function(x.eigen(), exp_fn);
  const HermitianMatrix ey = matrix_function(y.eigen(), exp_fn);
  const HermitianMatrix exy = matrix_function(HermitianMatrix(x.dense() + y.dense()), exp_fn);

  LimitProbeReport r;
  r.trace_exp_x = trace_real(ex.dense());
  r.classical_gt_slack = trace_real(ex.dense() * ey.dense()) - trace_real(exy.dense());
  r.tol_used = tol * std::max(1.0, r.trace_exp_x);
  r.holds = r.classical_gt_slack >= -tol * std::max(1.0, trace_real(exy.dense()));
  for (double nu : nu_grid) {
    r.nus.push_back(nu);
    r.deviations.push_back(std::abs(trace_power(exp_nu(x, nu), 1.0) - r.trace_exp_x));
    const GtChainReport g = gt_chain(x, y, nu, tol);
    r.gt_end_to_end_slacks.push_back(g.end_to_end_slack);
    r.holds = r.holds && g.holds;
  }
  r.monotone = true;
  r.strictly_decreasing = true;
  for (std::size_t i = 0; i + 1 < r.deviations.size(); ++i) {
    r.monotone = r.monotone && r.deviations[i + 1] <= r.deviations[i] + r.tol_used;
    r.strictly_decreasing = r.strictly_decreasing && r.deviations[i + 1] < r.deviations[i];
  }
  r.holds = r.holds && r.monotone;
  return r;
}

}  // namespace tracelab
