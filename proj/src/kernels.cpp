#include "wem/kernels.hpp"

#include <cmath>
#include <mutex>
#include <numbers>

#include "wem/errors.hpp"

namespace wem {

Rational bernoulliNumber(int n) {
  if (n < 0) throw InputError("Bernoulli index must be non-negative");
  static std::mutex mutex;
  static std::vector<Rational> cache{Rational(1)};
  std::lock_guard lock(mutex);
  // sum_{j=0}^{m} C(m+1, j) b_j = 0 for m >= 1
  while (static_cast<int>(cache.size()) <= n) {
    const int m = static_cast<int>(cache.size());
    Rational acc(0);
    for (int j = 0; j < m; ++j) acc += binomial(m + 1, j) * cache[static_cast<std::size_t>(j)];
    cache.push_back(-acc / Rational(m + 1));
  }
  return cache[static_cast<std::size_t>(n)];
}

MultiPolynomial bernoulliPolynomial(int m) {
  std::vector<Rational> c(static_cast<std::size_t>(m) + 1);
  for (int j = 0; j <= m; ++j) c[static_cast<std::size_t>(m - j)] = binomial(m, j) * bernoulliNumber(j);
  return MultiPolynomial::univariate(c);
}

TruncatedSeries<Rational> toddSeries(int k) {
  // (1 - e^{-S}) / S = sum_j (-1)^j S^j / (j+1)!
  std::vector<Rational> c(static_cast<std::size_t>(k) + 1);
  for (int j = 0; j <= k; ++j) {
    c[static_cast<std::size_t>(j)] = Rational(j % 2 == 0 ? 1 : -1) / factorial(j + 1);
  }
  return TruncatedSeries<Rational>(std::move(c), k).reciprocal();
}

TruncatedSeries<Rational> lSeries(int k) {
  std::vector<Rational> c(static_cast<std::size_t>(k) + 1, Rational(0));
  c[0] = Rational(1);
  for (int j = 2; j <= k; j += 2) c[static_cast<std::size_t>(j)] = bernoulliNumber(j) / factorial(j);
  return TruncatedSeries<Rational>(std::move(c), k);
}

TruncatedSeries<Rational> chiSeries(const Rational& q, int k) {
  const auto todd = toddSeries(k);
  return todd * q + todd.reflect() * (Rational(1) - q);
}

OperatorPolynomial twistedOperator(const Rational& q, const RootOfUnity& twist, int k) {
  if (twist.isOne()) throw InputError("twistedOperator needs lambda != 1; use chiSeries");
  if (k < 2) throw InputError("twistedOperator needs k > 1");
  const int order = twist.order();
  const Cyclotomic lambda = twist.value(order);
  std::vector<Cyclotomic> c(static_cast<std::size_t>(k) + 1, Cyclotomic(Rational(0), order));
  c[1] = Cyclotomic(q, order) + lambda / (Cyclotomic(Rational(1), order) - lambda);
  for (int m = 2; m <= k; ++m) c[static_cast<std::size_t>(m)] = kernelAtZero(m, twist);
  return OperatorPolynomial{q, twist, k, TruncatedSeries<Cyclotomic>(std::move(c), k)};
}

OperatorPolynomial eulerMaclaurinOperator(const Rational& q, const RootOfUnity& twist, int k) {
  if (!twist.isOne()) return twistedOperator(q, twist, k);
  if (k < 1) throw InputError("operator order must be positive");
  const auto chi = chiSeries(q, 2 * (k / 2));
  return OperatorPolynomial{q, twist, k, toCyclotomic(chi.truncate(k))};
}

namespace {

using Piece = std::vector<Cyclotomic>;

Cyclotomic evaluatePiece(const Piece& p, const Rational& t) {
  Cyclotomic acc(Rational(0));
  for (std::size_t i = p.size(); i-- > 0;) acc = acc * Cyclotomic(t) + p[i];
  return acc;
}

// integral_0^t of p, as a polynomial with zero constant term
Piece antiderivative(const Piece& p) {
  Piece r(p.size() + 1, Cyclotomic(0));
  for (std::size_t i = 0; i < p.size(); ++i) r[i + 1] = p[i] * Cyclotomic(Rational(1, static_cast<long>(i + 1)));
  return r;
}

Cyclotomic integralOverUnit(const Piece& p) {
  Cyclotomic acc(0);
  for (std::size_t i = 0; i < p.size(); ++i) acc += p[i] * Cyclotomic(Rational(1, static_cast<long>(i + 1)));
  return acc;
}

}  // namespace

PeriodizedKernel::PeriodizedKernel(int degree, RootOfUnity twist, std::vector<Piece> pieces)
    : degree_(degree), twist_(std::move(twist)), pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw InputError("kernel needs at least one piece");
  numeric_.reserve(pieces_.size());
  for (const auto& p : pieces_) {
    std::vector<std::complex<double>> n;
    n.reserve(p.size());
    for (const auto& c : p) n.push_back(c.toComplex());
    numeric_.push_back(std::move(n));
  }
}

Cyclotomic PeriodizedKernel::rightLimit(const Rational& x) const {
  const long period = static_cast<long>(pieces_.size());
  const Integer fl = x.floor();
  const long j = ((fl.get_si() % period) + period) % period;
  return evaluatePiece(pieces_[static_cast<std::size_t>(j)], x - Rational(fl));
}

Cyclotomic PeriodizedKernel::leftLimit(const Rational& x) const {
  if (!x.isInteger()) return rightLimit(x);
  const long period = static_cast<long>(pieces_.size());
  const long j = (((x.numerator().get_si() - 1) % period) + period) % period;
  return evaluatePiece(pieces_[static_cast<std::size_t>(j)], Rational(1));
}

Cyclotomic PeriodizedKernel::valueAt(const Rational& x) const {
  if (degree_ == 1 && x.isInteger()) {
    return (leftLimit(x) + rightLimit(x)) * Cyclotomic(Rational(1, 2));
  }
  return rightLimit(x);
}

std::complex<double> PeriodizedKernel::operator()(double x) const {
  const double fl = std::floor(x);
  const long period = static_cast<long>(numeric_.size());
  const long j = ((static_cast<long>(fl) % period) + period) % period;
  const double t = x - fl;
  const auto& p = numeric_[static_cast<std::size_t>(j)];
  std::complex<double> acc = 0.0;
  for (std::size_t i = p.size(); i-- > 0;) acc = acc * t + p[i];
  return acc;
}

PeriodizedKernel periodizedBernoulli(int m) {
  if (m < 1) throw InputError("periodized Bernoulli kernel needs m >= 1");
  const auto b = bernoulliPolynomial(m).univariateCoefficients();
  const Rational scale = factorial(m).inverse();
  Piece piece;
  piece.reserve(b.size());
  for (const auto& c : b) piece.emplace_back(c * scale);
  return PeriodizedKernel(m, RootOfUnity(), {piece});
}

PeriodizedKernel twistedKernel(int m, const RootOfUnity& twist) {
  if (m < 1) throw InputError("twisted kernel needs m >= 1");
  if (twist.isOne()) throw InputError("twistedKernel needs lambda != 1; use periodizedBernoulli");
  const int period = twist.order();
  const Cyclotomic lambda = twist.value(period);

  // Q_1: constant c_j on (j, j+1), c_j - c_{j-1} = -lambda^j, mean zero over one period.
  std::vector<Piece> pieces(static_cast<std::size_t>(period));
  std::vector<Cyclotomic> offset(static_cast<std::size_t>(period), Cyclotomic(Rational(0), period));
  Cyclotomic power(Rational(1), period);
  for (int j = 1; j < period; ++j) {
    power *= lambda;
    offset[static_cast<std::size_t>(j)] = offset[static_cast<std::size_t>(j) - 1] - power;
  }
  Cyclotomic offsetSum(Rational(0), period);
  for (const auto& o : offset) offsetSum += o;
  const Cyclotomic c0 = -offsetSum * Cyclotomic(Rational(1, period));
  for (int j = 0; j < period; ++j) pieces[static_cast<std::size_t>(j)] = {c0 + offset[static_cast<std::size_t>(j)]};

  for (int deg = 2; deg <= m; ++deg) {
    // Q_deg = Q_deg(j) + integral_j^x Q_{deg-1}, continuous, mean zero.
    std::vector<Piece> next(static_cast<std::size_t>(period));
    std::vector<Cyclotomic> start(static_cast<std::size_t>(period), Cyclotomic(Rational(0), period));
    Cyclotomic mean(Rational(0), period);
    for (int j = 0; j < period; ++j) {
      Piece anti = antiderivative(pieces[static_cast<std::size_t>(j)]);
      if (j + 1 < period) {
        start[static_cast<std::size_t>(j) + 1] =
            start[static_cast<std::size_t>(j)] + integralOverUnit(pieces[static_cast<std::size_t>(j)]);
      }
      mean += start[static_cast<std::size_t>(j)] + integralOverUnit(anti);
      next[static_cast<std::size_t>(j)] = std::move(anti);
    }
    const Cyclotomic shift = -mean * Cyclotomic(Rational(1, period));
    for (int j = 0; j < period; ++j) {
      next[static_cast<std::size_t>(j)][0] = start[static_cast<std::size_t>(j)] + shift;
    }
    pieces = std::move(next);
  }
  return PeriodizedKernel(m, twist, std::move(pieces));
}

PeriodizedKernel eulerMaclaurinKernel(int m, const RootOfUnity& twist) {
  return twist.isOne() ? periodizedBernoulli(m) : twistedKernel(m, twist);
}

Cyclotomic kernelAtZero(int m, const RootOfUnity& twist) {
  if (m < 2) throw InputError("kernelAtZero needs m >= 2");
  return eulerMaclaurinKernel(m, twist).rightLimit(Rational(0));
}

double fourierPeriodizedBernoulli(int m, double x, int terms) {
  if (m < 1) throw InputError("Fourier series needs m >= 1");
  const int k = m / 2;
  const double sign = ((k - 1) % 2 == 0) ? 1.0 : -1.0;
  double sum = 0.0;
  for (int n = terms; n >= 1; --n) {
    const double w = 2.0 * std::numbers::pi * n;
    const double term = (m % 2 == 0) ? 2.0 * std::cos(w * x) : 2.0 * std::sin(w * x);
    sum += term / std::pow(w, m);
  }
  return sign * sum;
}

}  // namespace wem
