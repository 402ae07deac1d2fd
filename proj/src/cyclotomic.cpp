#include "wem/cyclotomic.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "ratpoly.hpp"
#include "wem/errors.hpp"

namespace wem {

namespace detail {
const RatPoly& cyclotomicCoefficients(int order);
}

using detail::RatPoly;

int cyclotomicDegree(int order) {
  return static_cast<int>(detail::cyclotomicCoefficients(order).size()) - 1;
}

Cyclotomic::Cyclotomic(const Rational& r, int order) : order_(order) {
  coeffs_.assign(static_cast<std::size_t>(cyclotomicDegree(order)), Rational(0));
  coeffs_[0] = r;
}

Cyclotomic::Cyclotomic(int order, std::vector<Rational> coefficients) : order_(order) {
  const RatPoly& phi = detail::cyclotomicCoefficients(order);
  coeffs_ = detail::reduceMonic(std::move(coefficients), phi);
  coeffs_.resize(phi.size() - 1, Rational(0));
}

Cyclotomic Cyclotomic::zPower(long power, int order) {
  const long p = ((power % order) + order) % order;
  std::vector<Rational> c(static_cast<std::size_t>(p) + 1, Rational(0));
  c.back() = Rational(1);
  return Cyclotomic(order, std::move(c));
}

Cyclotomic Cyclotomic::embed(int newOrder) const {
  if (newOrder == order_) return *this;
  if (newOrder % order_ != 0) {
    throw OrderMismatchError("cannot embed order " + std::to_string(order_) + " into order " +
                             std::to_string(newOrder));
  }
  const std::size_t step = static_cast<std::size_t>(newOrder / order_);
  std::vector<Rational> c((coeffs_.size() - 1) * step + 1, Rational(0));
  for (std::size_t i = 0; i < coeffs_.size(); ++i) c[i * step] = coeffs_[i];
  return Cyclotomic(newOrder, std::move(c));
}

std::optional<Rational> Cyclotomic::toRational() const {
  for (std::size_t i = 1; i < coeffs_.size(); ++i) {
    if (!coeffs_[i].isZero()) return std::nullopt;
  }
  return coeffs_[0];
}

std::complex<double> Cyclotomic::toComplex() const {
  std::complex<double> sum = 0.0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i].isZero()) continue;
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(i) / order_;
    sum += coeffs_[i].toDouble() * std::polar(1.0, angle);
  }
  return sum;
}

bool Cyclotomic::isZero() const {
  for (const auto& c : coeffs_) {
    if (!c.isZero()) return false;
  }
  return true;
}

bool Cyclotomic::isOne() const {
  auto r = toRational();
  return r && *r == Rational(1);
}

Cyclotomic Cyclotomic::inverse() const {
  if (isZero()) throw NonInvertibleError("inverse of zero cyclotomic element");
  // Extended Euclid in Q[z]: s*a + t*phi = g, g a nonzero constant since phi is irreducible.
  RatPoly a = coeffs_;
  detail::trim(a);
  RatPoly b = detail::cyclotomicCoefficients(order_);
  RatPoly s0{Rational(1)}, s1{};
  while (!b.empty()) {
    auto [q, r] = detail::divmod(a, b);
    RatPoly s2 = detail::sub(s0, detail::mul(q, s1));
    a = std::move(b);
    b = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  if (a.size() != 1) throw ConsistencyError("cyclotomic gcd is not a unit");
  const Rational g = a[0];
  for (auto& c : s0) c /= g;
  return Cyclotomic(order_, std::move(s0));
}

Cyclotomic Cyclotomic::pow(long exponent) const {
  if (exponent < 0) return inverse().pow(-exponent);
  Cyclotomic result(Rational(1), order_);
  Cyclotomic base = *this;
  while (exponent > 0) {
    if (exponent & 1) result *= base;
    base *= base;
    exponent >>= 1;
  }
  return result;
}

namespace {

int commonOrder(int a, int b) { return std::lcm(a, b); }

}  // namespace

Cyclotomic& Cyclotomic::operator+=(const Cyclotomic& o) {
  const int m = commonOrder(order_, o.order_);
  if (m != order_) *this = embed(m);
  const Cyclotomic rhs = o.embed(m);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
  return *this;
}

Cyclotomic& Cyclotomic::operator-=(const Cyclotomic& o) {
  const int m = commonOrder(order_, o.order_);
  if (m != order_) *this = embed(m);
  const Cyclotomic rhs = o.embed(m);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
  return *this;
}

Cyclotomic& Cyclotomic::operator*=(const Cyclotomic& o) {
  const int m = commonOrder(order_, o.order_);
  const Cyclotomic lhs = embed(m);
  const Cyclotomic rhs = o.embed(m);
  RatPoly prod(lhs.coeffs_.size() + rhs.coeffs_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < lhs.coeffs_.size(); ++i) {
    if (lhs.coeffs_[i].isZero()) continue;
    for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j) {
      if (rhs.coeffs_[j].isZero()) continue;
      prod[i + j] += lhs.coeffs_[i] * rhs.coeffs_[j];
    }
  }
  *this = Cyclotomic(m, std::move(prod));
  return *this;
}

Cyclotomic operator-(const Cyclotomic& a) {
  Cyclotomic r = a;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

bool operator==(const Cyclotomic& a, const Cyclotomic& b) {
  const int m = commonOrder(a.order_, b.order_);
  return a.embed(m).coeffs_ == b.embed(m).coeffs_;
}

std::ostream& operator<<(std::ostream& os, const Cyclotomic& c) {
  os << "[order " << c.order_ << ":";
  for (const auto& x : c.coeffs_) os << ' ' << x;
  return os << ']';
}

RootOfUnity::RootOfUnity(const Rational& rotation) : rotation_(rotation.fractionalPart()) {}

int RootOfUnity::order() const { return static_cast<int>(rotation_.denominator().get_si()); }

Cyclotomic RootOfUnity::value(int ambientOrder) const {
  return rootOfUnity(rotation_, ambientOrder == 0 ? order() : ambientOrder);
}

std::complex<double> RootOfUnity::toComplex() const {
  return std::polar(1.0, 2.0 * std::numbers::pi * rotation_.toDouble());
}

Cyclotomic rootOfUnity(const Rational& rotation, int ambientOrder) {
  const Rational r = rotation.fractionalPart();
  const long den = r.denominator().get_si();
  if (ambientOrder % den != 0) {
    throw OrderMismatchError("root of unity of order " + std::to_string(den) +
                             " does not live in the ring of order " + std::to_string(ambientOrder));
  }
  const long power = r.numerator().get_si() * (ambientOrder / den);
  return Cyclotomic::zPower(power, ambientOrder);
}

std::optional<Rational> isRational(const Cyclotomic& x) { return x.toRational(); }

}  // namespace wem
