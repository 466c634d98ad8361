#pragma once

// Independent eigenvalue oracle for small Hermitian matrices: characteristic
// polynomial by Faddeev-LeVerrier, real roots by Newton from above with
// deflation, then polished against the undeflated polynomial. Shares nothing
// with the Jacobi solver beyond DenseMatrix storage.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "tracelab/linalg.hpp"

namespace oracle {

using tracelab::Complex;
using tracelab::DenseMatrix;

// coeffs[k] multiplies x^k; monic of degree n.
inline std::vector<double> char_poly(const DenseMatrix& a) {
  const std::size_t n = a.n();
  std::vector<double> c(n + 1, 0.0);
  c[n] = 1.0;
  std::vector<Complex> m(n * n, Complex{});
  for (std::size_t k = 1; k <= n; ++k) {
    // M <- A M + c[n-k+1] I
    std::vector<Complex> next(n * n, Complex{});
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Complex s{};
        for (std::size_t l = 0; l < n; ++l) s += a(i, l) * m[l * n + j];
        next[i * n + j] = s;
      }
    for (std::size_t i = 0; i < n; ++i) next[i * n + i] += c[n - k + 1];
    m = next;
    Complex tr{};
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) tr += a(i, l) * m[l * n + i];
    c[n - k] = -tr.real() / static_cast<double>(k);
  }
  return c;
}

inline double horner(const std::vector<double>& c, double x, double* deriv) {
  double p = 0.0, d = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) {
    d = d * x + p;
    p = p * x + c[k];
  }
  if (deriv) *deriv = d;
  return p;
}

inline double newton_from(const std::vector<double>& c, double x) {
  for (int it = 0; it < 500; ++it) {
    double d = 0.0;
    const double p = horner(c, x, &d);
    if (d == 0.0 || p == 0.0) break;
    const double step = p / d;
    x -= step;
    if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(x))) break;
  }
  return x;
}

/// Eigenvalues of a Hermitian matrix (n <= 4 intended), decreasing.
inline std::vector<double> eigenvalues(const DenseMatrix& a) {
  const std::vector<double> full = char_poly(a);
  std::vector<double> poly = full;
  std::vector<double> roots;
  while (poly.size() > 1) {
    double bound = 0.0;
    for (std::size_t k = 0; k + 1 < poly.size(); ++k) bound = std::max(bound, std::abs(poly[k]));
    double r = newton_from(poly, 1.0 + bound);
    r = newton_from(full, r);
    roots.push_back(r);
    // Synthetic division by (x - r).
    std::vector<double> q(poly.size() - 1);
    double carry = 0.0;
    for (std::size_t k = poly.size() - 1; k-- > 0;) {
      carry = poly[k + 1] + carry * r;
      q[k] = carry;
    }
    poly = q;
  }
  std::sort(roots.begin(), roots.end(), std::greater<>());
  return roots;
}

inline std::vector<double> partial_sums(std::vector<double> v) {
  std::sort(v.begin(), v.end(), std::greater<>());
  for (std::size_t k = 1; k < v.size(); ++k) v[k] += v[k - 1];
  return v;
}

}  // namespace oracle
