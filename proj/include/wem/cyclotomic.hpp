#pragma once

#include <complex>
#include <optional>
#include <ostream>
#include <vector>

#include "wem/rational.hpp"

namespace wem {

/// Element of Q[z]/(Phi_M(z)), z a primitive M-th root of unity.
///
/// Coefficients are stored lowest degree first with length deg(Phi_M). Binary operations
/// between elements of different orders lift both operands into the ring of order lcm.
class Cyclotomic {
 public:
  Cyclotomic() : Cyclotomic(Rational(0)) {}
  Cyclotomic(int n) : Cyclotomic(Rational(n)) {}  // NOLINT(google-explicit-constructor)
  Cyclotomic(const Rational& r, int order = 1);  // NOLINT(google-explicit-constructor)
  /// Reduces an arbitrary coefficient list modulo Phi_order.
  Cyclotomic(int order, std::vector<Rational> coefficients);

  /// z^power in the ring of the given order.
  static Cyclotomic zPower(long power, int order);

  int order() const { return order_; }
  const std::vector<Rational>& coefficients() const { return coeffs_; }

  /// Image under z_M -> z_{M'}^{M'/M}; newOrder must be a multiple of order().
  Cyclotomic embed(int newOrder) const;
  /// The constant coefficient when every other coefficient vanishes.
  std::optional<Rational> toRational() const;
  std::complex<double> toComplex() const;
  bool isZero() const;
  bool isOne() const;
  /// Multiplicative inverse in Q(z); throws NonInvertibleError on zero.
  Cyclotomic inverse() const;
  Cyclotomic pow(long exponent) const;

  Cyclotomic& operator+=(const Cyclotomic& o);
  Cyclotomic& operator-=(const Cyclotomic& o);
  Cyclotomic& operator*=(const Cyclotomic& o);
  Cyclotomic& operator/=(const Cyclotomic& o) { return *this *= o.inverse(); }
  friend Cyclotomic operator+(Cyclotomic a, const Cyclotomic& b) { return a += b; }
  friend Cyclotomic operator-(Cyclotomic a, const Cyclotomic& b) { return a -= b; }
  friend Cyclotomic operator*(Cyclotomic a, const Cyclotomic& b) { return a *= b; }
  friend Cyclotomic operator/(Cyclotomic a, const Cyclotomic& b) { return a /= b; }
  friend Cyclotomic operator-(const Cyclotomic& a);
  friend bool operator==(const Cyclotomic& a, const Cyclotomic& b);

  friend std::ostream& operator<<(std::ostream& os, const Cyclotomic& c);

 private:
  int order_ = 1;
  std::vector<Rational> coeffs_;
};

/// Phi_M degree, i.e. Euler's totient of M.
int cyclotomicDegree(int order);

/// A root of unity e^{2 pi i r} with r in [0, 1) kept as an exact rational rotation number.
class RootOfUnity {
 public:
  RootOfUnity() = default;
  /// The rotation is reduced modulo 1.
  explicit RootOfUnity(const Rational& rotation);

  const Rational& rotation() const { return rotation_; }
  /// Multiplicative order, i.e. the denominator of the rotation.
  int order() const;
  bool isOne() const { return rotation_.isZero(); }
  RootOfUnity inverse() const { return RootOfUnity(-rotation_); }
  RootOfUnity operator*(const RootOfUnity& o) const { return RootOfUnity(rotation_ + o.rotation_); }
  RootOfUnity pow(long k) const { return RootOfUnity(rotation_ * Rational(k)); }
  /// Exact value in the ring of the given order (defaults to its own order).
  Cyclotomic value(int ambientOrder = 0) const;
  std::complex<double> toComplex() const;

  friend bool operator==(const RootOfUnity&, const RootOfUnity&) = default;

 private:
  Rational rotation_{0};
};

/// z^{a M / N} for rotation a/N in the ring of order M; throws OrderMismatchError unless N | M.
Cyclotomic rootOfUnity(const Rational& rotation, int ambientOrder);

/// Convenience wrapper around Cyclotomic::toRational.
std::optional<Rational> isRational(const Cyclotomic& x);

}  // namespace wem
