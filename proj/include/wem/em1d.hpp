#pragma once

// One-dimensional weighted sums and Euler-Maclaurin formulas with remainder.

#include <complex>
#include <functional>
#include <optional>
#include <string>

#include "wem/cyclotomic.hpp"
#include "wem/multipoly.hpp"
#include "wem/rational.hpp"
#include "wem/smooth.hpp"

namespace wem {

/// An exact function on the integers vanishing outside [lo, hi].
struct IntegerSampled {
  std::function<Rational(long)> f;
  long lo = 0;
  long hi = 0;
  Rational operator()(long n) const { return (n < lo || n > hi) ? Rational(0) : f(n); }
};

/// q f(a) + sum_{a<n<b} f(n) + q f(b).
Rational weightedIntervalSum(const IntegerSampled& f, long a, long b, const Rational& q);
double weightedIntervalSum(const Smooth1D& f, long a, long b, const Rational& q);

/// q f(a) + f(a+1) + ... over the support.
Rational weightedRaySum(const IntegerSampled& f, long a, const Rational& q);
double weightedRaySum(const Smooth1D& f, long a, const Rational& q);

/// q f(a) + sum_{n>=1} lambda^n f(a+n).
Cyclotomic twistedRaySum(const IntegerSampled& f, const RootOfUnity& lambda, const Rational& q, long a = 0);
std::complex<double> twistedRaySum(const Smooth1D& f, const RootOfUnity& lambda, const Rational& q, long a = 0);

struct EM1DReport {
  std::string kind;  // "interval", "ray" or "twisted-ray"
  Rational q;
  long a = 0;
  std::optional<long> b;
  RootOfUnity twist;
  int order = 0;  // m for interval/ray, k for the twisted ray
  std::complex<double> weightedSum;
  std::complex<double> mainTerm;
  std::complex<double> remainderByDifference;
  std::complex<double> remainderByIntegral;
  double quadratureError = 0.0;
  // set by the symbolic polynomial path
  std::optional<Rational> exactWeightedSum;
  std::optional<Rational> exactMainTerm;
};

/// Weighted formula on [a, b] with truncation chi_q^{2 floor(m/2)} at both ends.
EM1DReport emInterval(const Smooth1D& f, long a, long b, const Rational& q, int m);

/// Symbolic version for a univariate polynomial; the remainder integral is still numeric.
/// A polynomial is treated as cut off smoothly outside [a - margin, b + margin], which
/// leaves every term of the formula unchanged.
EM1DReport emInterval(const MultiPolynomial& p, long a, long b, const Rational& q, int m, double margin = 1.0);

/// Weighted formula on the ray [a, infinity).
EM1DReport emRay(const Smooth1D& f, long a, const Rational& q, int m);

/// Twisted formula with the operator N_q^{k,lambda}; lambda = 1 reduces to emRay.
EM1DReport emTwistedRay(const Smooth1D& f, const RootOfUnity& lambda, const Rational& q, int k, long a = 0);

}  // namespace wem
