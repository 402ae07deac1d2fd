#pragma once

// Independent reference computations used only by the test suites.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <functional>
#include <span>
#include <vector>

#include "wem/cyclotomic.hpp"
#include "wem/multipoly.hpp"
#include "wem/polytope.hpp"
#include "wem/rational.hpp"
#include "wem/series.hpp"

namespace wem::oracle {

/// Taylor coefficients of S (q + lambda / (e^S - lambda)) up to degree k, the closed-form
/// generating function of the twisted operator.
inline TruncatedSeries<Cyclotomic> twistGeneratingSeries(const Rational& q, const RootOfUnity& twist,
                                                         int k) {
  const int order = twist.order();
  const Cyclotomic lambda = twist.value(order);
  std::vector<Cyclotomic> c;
  for (int j = 0; j <= k; ++j) c.emplace_back(factorial(j).inverse(), order);
  c[0] -= lambda;  // e^S - lambda
  const TruncatedSeries<Cyclotomic> denom(c, k);
  TruncatedSeries<Cyclotomic> inner = denom.reciprocal() * lambda;
  std::vector<Cyclotomic> shifted(static_cast<std::size_t>(k) + 1, Cyclotomic(Rational(0), order));
  shifted[1] = inner[0] + Cyclotomic(q, order);
  for (int j = 2; j <= k; ++j) shifted[static_cast<std::size_t>(j)] = inner[j - 1];
  return TruncatedSeries<Cyclotomic>(shifted, k);
}

/// Bernoulli numbers read off the Todd series computed by direct series division.
inline Rational bernoulliFromTodd(int n) {
  std::vector<Rational> c(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) c[static_cast<std::size_t>(j)] = Rational(j % 2 == 0 ? 1 : -1) / factorial(j + 1);
  const auto todd = TruncatedSeries<Rational>(c, n).reciprocal();
  return todd[n] * factorial(n) * Rational(n % 2 == 0 ? 1 : -1);
}

/// Composite Simpson rule on a uniform grid; for smooth integrands only.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
  if (panels % 2 != 0) ++panels;
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return s * h / 3.0;
}

/// Calls fn(x, c(x)) for every lattice point of {<u_i, x> + mu_i >= 0} inside [-radius, radius]^n,
/// reading the half-spaces directly.
template <class Fn>
void forEachLatticePoint(const HalfSpaceDescription& d, long radius, Fn&& fn) {
  const int n = d.dimension;
  std::vector<long> x(static_cast<std::size_t>(n), -radius);
  while (true) {
    int active = 0;
    bool inside = true;
    for (const auto& h : d.halfspaces) {
      long s = h.offset;
      for (int k = 0; k < n; ++k) s += h.normal[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(k)];
      if (s < 0) inside = false;
      if (s == 0) ++active;
    }
    if (inside) fn(static_cast<const std::vector<long>&>(x), active);
    int k = n - 1;
    while (k >= 0 && x[static_cast<std::size_t>(k)] == radius) x[static_cast<std::size_t>(k--)] = -radius;
    if (k < 0) return;
    ++x[static_cast<std::size_t>(k)];
  }
}

/// sum over lattice points of q^{c(x)} p(x), by direct enumeration.
inline Rational bruteWeightedSum(const HalfSpaceDescription& d, const MultiPolynomial& p, const Rational& q,
                                 long radius = 6) {
  Rational acc(0);
  forEachLatticePoint(d, radius, [&](const std::vector<long>& x, int active) {
    std::vector<Rational> xr;
    for (long c : x) xr.emplace_back(c);
    acc += q.pow(active) * p.evaluate(std::span<const Rational>(xr));
  });
  return acc;
}

/// All monomials in n variables of total degree at most degree.
inline std::vector<MultiPolynomial> monomialsUpTo(int n, int degree) {
  std::vector<MultiPolynomial> out;
  Exponent e(static_cast<std::size_t>(n), 0);
  while (true) {
    int total = 0;
    for (int c : e) total += c;
    if (total <= degree) out.push_back(MultiPolynomial::monomial(n, e, Rational(1)));
    int k = n - 1;
    while (k >= 0 && e[static_cast<std::size_t>(k)] == degree) e[static_cast<std::size_t>(k--)] = 0;
    if (k < 0) return out;
    ++e[static_cast<std::size_t>(k)];
  }
}

/// Determinant by cofactor expansion.
inline long det(const std::vector<std::vector<long>>& m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  if (n == 1) return m[0][0];
  long acc = 0;
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::vector<long>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<long> row;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != c) row.push_back(m[r][j]);
      }
      minor.push_back(row);
    }
    acc += (c % 2 == 0 ? 1 : -1) * m[0][c] * det(minor);
  }
  return acc;
}

/// gcd of all r x r minors of a matrix with at least r rows and columns
inline long determinantalDivisor(const std::vector<std::vector<long>>& a, std::size_t r) {
  const std::size_t rows = a.size(), cols = a[0].size();
  long g = 0;
  std::vector<bool> rowPick(rows, false), colPick(cols, false);
  std::fill(rowPick.begin(), rowPick.begin() + static_cast<long>(r), true);
  do {
    std::fill(colPick.begin(), colPick.end(), false);
    std::fill(colPick.begin(), colPick.begin() + static_cast<long>(r), true);
    do {
      std::vector<std::vector<long>> sub;
      for (std::size_t i = 0; i < rows; ++i) {
        if (!rowPick[i]) continue;
        std::vector<long> row;
        for (std::size_t j = 0; j < cols; ++j) {
          if (colPick[j]) row.push_back(a[i][j]);
        }
        sub.push_back(row);
      }
      g = std::gcd(g, det(sub));
    } while (std::prev_permutation(colPick.begin(), colPick.end()));
  } while (std::prev_permutation(rowPick.begin(), rowPick.end()));
  return g;
}

}  // namespace wem::oracle
