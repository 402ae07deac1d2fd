#pragma once

#include <map>
#include <span>
#include <vector>

#include "wem/rational.hpp"

namespace wem {

using Exponent = std::vector<int>;

/// Sparse polynomial in a fixed number of variables with rational coefficients.
/// Zero coefficients are never stored.
class MultiPolynomial {
 public:
  using TermMap = std::map<Exponent, Rational>;

  explicit MultiPolynomial(int variableCount = 1);

  static MultiPolynomial constant(int variableCount, const Rational& c);
  static MultiPolynomial variable(int variableCount, int index);
  static MultiPolynomial monomial(int variableCount, Exponent exponents, const Rational& c);
  /// Univariate polynomial from coefficients listed lowest degree first.
  static MultiPolynomial univariate(const std::vector<Rational>& coefficients);

  int variableCount() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  bool isZero() const { return terms_.empty(); }
  int totalDegree() const;
  int degreeIn(int var) const;
  Rational coefficient(const Exponent& e) const;
  /// Coefficients of a univariate polynomial, lowest degree first.
  std::vector<Rational> univariateCoefficients() const;

  void addTerm(const Exponent& e, const Rational& c);

  MultiPolynomial derivative(int var) const;
  Rational evaluate(std::span<const Rational> point) const;
  double evaluate(std::span<const double> point) const;
  /// Substitutes poly_i for variable i; the result lives in the substitutes' ring.
  MultiPolynomial compose(std::span<const MultiPolynomial> substitutes) const;
  MultiPolynomial pow(int exponent) const;

  MultiPolynomial& operator+=(const MultiPolynomial& o);
  MultiPolynomial& operator-=(const MultiPolynomial& o);
  MultiPolynomial& operator*=(const Rational& c);
  friend MultiPolynomial operator+(MultiPolynomial a, const MultiPolynomial& b) { return a += b; }
  friend MultiPolynomial operator-(MultiPolynomial a, const MultiPolynomial& b) { return a -= b; }
  friend MultiPolynomial operator*(const MultiPolynomial& a, const MultiPolynomial& b);
  friend MultiPolynomial operator*(MultiPolynomial a, const Rational& c) { return a *= c; }
  friend MultiPolynomial operator*(const Rational& c, MultiPolynomial a) { return a *= c; }
  friend MultiPolynomial operator-(const MultiPolynomial& a) { return a * Rational(-1); }
  friend bool operator==(const MultiPolynomial&, const MultiPolynomial&) = default;

 private:
  void checkArity(const MultiPolynomial& o) const;

  int nvars_;
  TermMap terms_;
};

/// The M-th cyclotomic polynomial, obtained by dividing z^M - 1 by Phi_d for proper divisors d.
MultiPolynomial cyclotomicPolynomial(int order);

}  // namespace wem
