#pragma once

// Power series (Todd, L, chi_q), twisted operator polynomials N_q^{k,lambda}, and the
// periodized kernels P_m / Q_{m,lambda} used by every Euler-Maclaurin remainder.

#include <complex>
#include <vector>

#include "wem/cyclotomic.hpp"
#include "wem/multipoly.hpp"
#include "wem/rational.hpp"
#include "wem/series.hpp"

namespace wem {

/// Bernoulli number with b_1 = -1/2, so that Todd(S) = 1 - b_1 S + sum b_{2n}/(2n)! S^{2n}.
Rational bernoulliNumber(int n);

/// Bernoulli polynomial B_m(x) (univariate).
MultiPolynomial bernoulliPolynomial(int m);

/// S / (1 - e^{-S}) truncated at degree k.
TruncatedSeries<Rational> toddSeries(int k);

/// (S/2) / tanh(S/2) truncated at degree k.
TruncatedSeries<Rational> lSeries(int k);

/// q Todd(S) + (1 - q) Todd(-S) truncated at degree k.
TruncatedSeries<Rational> chiSeries(const Rational& q, int k);

/// A polynomial in S applied as a differential operator in a dilation parameter h.
struct OperatorPolynomial {
  Rational weight;
  RootOfUnity twist;
  int order = 0;
  TruncatedSeries<Cyclotomic> coefficients;

  std::complex<double> numericCoefficient(int j) const {
    return coefficients.coefficient(j).toComplex();
  }
};

/// N_q^{k,lambda}(S) for lambda != 1, with coefficients read off the twisted kernels at 0.
OperatorPolynomial twistedOperator(const Rational& q, const RootOfUnity& twist, int k);

/// N_q^{k,lambda} for any lambda: chi_q^{2 floor(k/2)} when lambda = 1, else twistedOperator.
OperatorPolynomial eulerMaclaurinOperator(const Rational& q, const RootOfUnity& twist, int k);

/// Piecewise polynomial periodic kernel; piece j is a polynomial in t = x - j on (j, j+1).
class PeriodizedKernel {
 public:
  PeriodizedKernel(int degree, RootOfUnity twist, std::vector<std::vector<Cyclotomic>> pieces);

  int degree() const { return degree_; }
  const RootOfUnity& twist() const { return twist_; }
  int period() const { return static_cast<int>(pieces_.size()); }
  const std::vector<std::vector<Cyclotomic>>& pieces() const { return pieces_; }

  /// Exact value. At an integer jump (degree 1) the midpoint of the one-sided limits.
  Cyclotomic valueAt(const Rational& x) const;
  /// Right limit at x (the piece starting at floor(x)).
  Cyclotomic rightLimit(const Rational& x) const;
  Cyclotomic leftLimit(const Rational& x) const;
  /// Floating-point evaluation; integer points use the right-hand piece.
  std::complex<double> operator()(double x) const;

 private:
  int degree_;
  RootOfUnity twist_;
  std::vector<std::vector<Cyclotomic>> pieces_;
  std::vector<std::vector<std::complex<double>>> numeric_;
};

/// P_m(x) = B_m({x}) / m!, period 1.
PeriodizedKernel periodizedBernoulli(int m);

/// Q_{m,lambda} for lambda != 1 of order N: period N, mean zero, derivative Q_{m-1,lambda},
/// and Q_1 jumping by -lambda^j at each integer j.
PeriodizedKernel twistedKernel(int m, const RootOfUnity& twist);

/// Q_{m,lambda} with the convention Q_{m,1} = P_m.
PeriodizedKernel eulerMaclaurinKernel(int m, const RootOfUnity& twist);

/// Q_{m,lambda}(0) for m >= 2.
Cyclotomic kernelAtZero(int m, const RootOfUnity& twist);

/// Partial Fourier sum of P_m with the given number of terms (numerical cross-check only).
double fourierPeriodizedBernoulli(int m, double x, int terms);

}  // namespace wem
