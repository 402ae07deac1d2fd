#include "wem/em1d.hpp"

#include <algorithm>
#include <cmath>

#include "wem/errors.hpp"
#include "wem/kernels.hpp"
#include "wem/quadrature.hpp"

namespace wem {

namespace {

long lastInteger(double hi) { return static_cast<long>(std::floor(hi)); }

double sign(int power) { return power % 2 == 0 ? 1.0 : -1.0; }

QuadratureResult integrateFunction(const Smooth1D& f, double a, double b) {
  const double lo = std::max(a, f.lo()), hi = std::min(b, f.hi());
  if (!(hi > lo)) return {};
  return integratePieces([&f](double x) { return std::complex<double>(f(x)); }, {lo, hi});
}

// (-1)^{m-1} int_{a}^{b} K(x - shift) f^{(m)}(x) dx, clipped to the support
QuadratureResult kernelRemainder(const Smooth1D& f, const PeriodizedKernel& kernel, int m, double a, double b,
                                 long shift) {
  const double lo = std::max(a, f.lo()), hi = std::min(b, f.hi());
  if (!(hi > lo)) return {};
  auto r = integrateIntegerPieces(
      [&](double x) { return kernel(x - static_cast<double>(shift)) * f.derivative(m, x); }, lo, hi);
  r.value *= sign(m - 1);
  return r;
}

// sum_{j>=1} c_j d^j/dh^j int_{a-h}^... f at h=0
std::complex<double> leftBoundaryTerms(const Smooth1D& f, const OperatorPolynomial& op, double a) {
  std::complex<double> acc = 0.0;
  for (int j = 1; j <= op.coefficients.degreeBound(); ++j) {
    acc += op.numericCoefficient(j) * (sign(j - 1) * f.derivative(j - 1, a));
  }
  return acc;
}

EM1DReport makeReport(std::string kind, const Rational& q, long a, int order) {
  EM1DReport r;
  r.kind = std::move(kind);
  r.q = q;
  r.a = a;
  r.order = order;
  return r;
}

void checkOrder(int m) {
  if (m <= 1) throw InputError("Euler-Maclaurin order must exceed 1");
}

}  // namespace

Rational weightedIntervalSum(const IntegerSampled& f, long a, long b, const Rational& q) {
  if (a >= b) throw InputError("invalid interval: need a < b");
  Rational acc = q * (f(a) + f(b));
  for (long n = std::max(a + 1, f.lo); n < b && n <= f.hi; ++n) acc += f(n);
  return acc;
}

double weightedIntervalSum(const Smooth1D& f, long a, long b, const Rational& q) {
  if (a >= b) throw InputError("invalid interval: need a < b");
  double acc = q.toDouble() * (f(static_cast<double>(a)) + f(static_cast<double>(b)));
  for (long n = a + 1; n < b; ++n) acc += f(static_cast<double>(n));
  return acc;
}

Rational weightedRaySum(const IntegerSampled& f, long a, const Rational& q) {
  Rational acc = q * f(a);
  for (long n = std::max(a + 1, f.lo); n <= f.hi; ++n) acc += f(n);
  return acc;
}

double weightedRaySum(const Smooth1D& f, long a, const Rational& q) {
  double acc = q.toDouble() * f(static_cast<double>(a));
  for (long n = a + 1; n <= lastInteger(f.hi()); ++n) acc += f(static_cast<double>(n));
  return acc;
}

Cyclotomic twistedRaySum(const IntegerSampled& f, const RootOfUnity& lambda, const Rational& q, long a) {
  const int order = lambda.order();
  Cyclotomic acc(q * f(a), order);
  for (long n = 1; a + n <= f.hi; ++n) {
    const Rational v = f(a + n);
    if (!v.isZero()) acc += lambda.pow(n).value(order) * Cyclotomic(v, order);
  }
  return acc;
}

std::complex<double> twistedRaySum(const Smooth1D& f, const RootOfUnity& lambda, const Rational& q, long a) {
  std::complex<double> acc = q.toDouble() * f(static_cast<double>(a));
  for (long n = 1; a + n <= lastInteger(f.hi()); ++n) {
    acc += lambda.pow(n).toComplex() * f(static_cast<double>(a + n));
  }
  return acc;
}

EM1DReport emInterval(const Smooth1D& f, long a, long b, const Rational& q, int m) {
  checkOrder(m);
  if (m > f.smoothness()) throw InputError("function lacks the requested smoothness");
  const auto op = eulerMaclaurinOperator(q, RootOfUnity(), m);
  EM1DReport r = makeReport("interval", q, a, m);
  r.b = b;
  r.weightedSum = weightedIntervalSum(f, a, b, q);

  const auto integral = integrateFunction(f, static_cast<double>(a), static_cast<double>(b));
  // d^j/dh2^j int^{b+h2} f = f^{(j-1)}(b)
  std::complex<double> right = 0.0;
  for (int j = 1; j <= op.coefficients.degreeBound(); ++j) {
    right += op.numericCoefficient(j) * f.derivative(j - 1, static_cast<double>(b));
  }
  r.mainTerm = integral.value + leftBoundaryTerms(f, op, static_cast<double>(a)) + right;
  r.remainderByDifference = r.weightedSum - r.mainTerm;

  const auto rem = kernelRemainder(f, periodizedBernoulli(m), m, static_cast<double>(a), static_cast<double>(b), 0);
  r.remainderByIntegral = rem.value;
  r.quadratureError = integral.error + rem.error;
  return r;
}

EM1DReport emInterval(const MultiPolynomial& p, long a, long b, const Rational& q, int m, double margin) {
  checkOrder(m);
  if (p.variableCount() != 1) throw InputError("emInterval expects a univariate polynomial");
  if (a >= b) throw InputError("invalid interval: need a < b");
  if (!(margin > 0)) throw InputError("cutoff margin must be positive");
  const auto chi = chiSeries(q, 2 * (m / 2));
  EM1DReport r = makeReport("interval", q, a, m);
  r.b = b;

  const IntegerSampled sampled{[&p](long n) {
                                 const std::vector<Rational> x{Rational(n)};
                                 return p.evaluate(std::span<const Rational>(x));
                               },
                               a, b};
  const Rational sum = weightedIntervalSum(sampled, a, b, q);

  // int_{a-h1}^{b+h2} p expanded: derivatives reduce to boundary values of p
  const auto c = p.univariateCoefficients();
  std::vector<Rational> anti(c.size() + 1, Rational(0));
  for (std::size_t i = 0; i < c.size(); ++i) anti[i + 1] = c[i] / Rational(static_cast<long>(i + 1));
  const auto antiPoly = MultiPolynomial::univariate(anti);
  auto at = [](const MultiPolynomial& poly, long x) {
    const std::vector<Rational> pt{Rational(x)};
    return poly.evaluate(std::span<const Rational>(pt));
  };
  Rational main = at(antiPoly, b) - at(antiPoly, a);
  MultiPolynomial d = p;
  for (int j = 1; j <= chi.degreeBound(); ++j) {
    const Rational sgn(j % 2 == 1 ? 1 : -1);
    main += chi[j] * (sgn * at(d, a) + at(d, b));
    d = d.derivative(0);
  }
  r.exactWeightedSum = sum;
  r.exactMainTerm = main;
  r.weightedSum = sum.toDouble();
  r.mainTerm = main.toDouble();
  r.remainderByDifference = (sum - main).toDouble();

  MultiPolynomial dm = p;
  for (int j = 0; j < m; ++j) dm = dm.derivative(0);
  const auto kernel = periodizedBernoulli(m);
  auto rem = integrateIntegerPieces(
      [&](double x) {
        const std::vector<double> pt{x};
        return kernel(x) * dm.evaluate(std::span<const double>(pt));
      },
      static_cast<double>(a), static_cast<double>(b));
  r.remainderByIntegral = rem.value * sign(m - 1);
  r.quadratureError = rem.error;
  return r;
}

EM1DReport emRay(const Smooth1D& f, long a, const Rational& q, int m) {
  checkOrder(m);
  EM1DReport r = emTwistedRay(f, RootOfUnity(), q, m, a);
  r.kind = "ray";
  return r;
}

EM1DReport emTwistedRay(const Smooth1D& f, const RootOfUnity& lambda, const Rational& q, int k, long a) {
  if (k <= 1) throw InputError("twisted formula needs k > 1");
  if (k > f.smoothness()) throw InputError("function lacks the requested smoothness");
  const auto op = eulerMaclaurinOperator(q, lambda, k);
  EM1DReport r = makeReport("twisted-ray", q, a, k);
  r.twist = lambda;
  r.weightedSum = twistedRaySum(f, lambda, q, a);

  const auto c0 = op.numericCoefficient(0);
  QuadratureResult integral;
  if (c0 != 0.0) integral = integrateFunction(f, static_cast<double>(a), f.hi());
  r.mainTerm = c0 * integral.value + leftBoundaryTerms(f, op, static_cast<double>(a));
  r.remainderByDifference = r.weightedSum - r.mainTerm;

  const auto rem = kernelRemainder(f, eulerMaclaurinKernel(k, lambda), k, static_cast<double>(a), f.hi(), a);
  r.remainderByIntegral = rem.value;
  r.quadratureError = integral.error + rem.error;
  return r;
}

}  // namespace wem
