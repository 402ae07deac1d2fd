#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

namespace wem {

using Integer = mpz_class;

/// Exact rational number in canonical form (lowest terms, positive denominator).
class Rational {
 public:
  Rational() = default;
  Rational(int n) : value_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(long n) : value_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(long long n) : value_(static_cast<long>(n)) {}  // NOLINT
  Rational(const Integer& n) : value_(n) {}  // NOLINT
  Rational(const Integer& num, const Integer& den);
  Rational(long num, long den) : Rational(Integer(num), Integer(den)) {}
  explicit Rational(const mpq_class& q) : value_(q) { value_.canonicalize(); }

  /// Parses "p/q" or "p". Throws InputError on malformed text or a zero denominator.
  static Rational parse(std::string_view text);

  Integer numerator() const { return value_.get_num(); }
  Integer denominator() const { return value_.get_den(); }
  const mpq_class& raw() const { return value_; }

  bool isZero() const { return sgn(value_) == 0; }
  bool isInteger() const { return value_.get_den() == 1; }
  int sign() const { return sgn(value_); }
  double toDouble() const { return value_.get_d(); }

  /// Largest integer not exceeding the value.
  Integer floor() const;
  /// Value minus floor, in [0, 1).
  Rational fractionalPart() const { return *this - Rational(floor()); }
  Rational abs() const { return Rational(mpq_class(::abs(value_))); }
  Rational inverse() const;
  Rational pow(int exponent) const;

  /// Canonical wire form: "p/q", or "p" when q = 1.
  std::string toString() const { return value_.get_str(); }

  Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
  Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
  Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.value_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.toString();
  }

 private:
  mpq_class value_{0};
};

Rational factorial(int n);
Rational binomial(int n, int k);
Integer lcm(const Integer& a, const Integer& b);

}  // namespace wem

template <>
struct std::hash<wem::Rational> {
  std::size_t operator()(const wem::Rational& r) const {
    return std::hash<std::string>{}(r.toString());
  }
};
