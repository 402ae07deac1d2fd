#pragma once

#include <algorithm>
#include <vector>

#include "wem/cyclotomic.hpp"
#include "wem/errors.hpp"
#include "wem/rational.hpp"

namespace wem {

/// Univariate power series in S truncated above degreeBound, over Rational or Cyclotomic.
template <class Scalar>
class TruncatedSeries {
 public:
  explicit TruncatedSeries(int degreeBound = 0)
      : bound_(degreeBound), coeffs_(static_cast<std::size_t>(degreeBound) + 1, Scalar(0)) {
    if (degreeBound < 0) throw InputError("negative series degree bound");
  }
  TruncatedSeries(std::vector<Scalar> coefficients, int degreeBound)
      : TruncatedSeries(degreeBound) {
    const std::size_t n = std::min(coefficients.size(), coeffs_.size());
    for (std::size_t i = 0; i < n; ++i) coeffs_[i] = std::move(coefficients[i]);
  }

  /// The series S itself.
  static TruncatedSeries variable(int degreeBound) {
    TruncatedSeries s(degreeBound);
    if (degreeBound >= 1) s.coeffs_[1] = Scalar(1);
    return s;
  }

  int degreeBound() const { return bound_; }
  const Scalar& operator[](int i) const { return coeffs_.at(static_cast<std::size_t>(i)); }
  Scalar coefficient(int i) const {
    return (i < 0 || i > bound_) ? Scalar(0) : coeffs_[static_cast<std::size_t>(i)];
  }
  const std::vector<Scalar>& coefficients() const { return coeffs_; }

  TruncatedSeries truncate(int newBound) const {
    return TruncatedSeries(std::vector<Scalar>(coeffs_), newBound);
  }

  /// S -> -S.
  TruncatedSeries reflect() const {
    TruncatedSeries r = *this;
    for (std::size_t i = 1; i < r.coeffs_.size(); i += 2) r.coeffs_[i] = -r.coeffs_[i];
    return r;
  }

  /// Multiplicative inverse; the constant term must be a unit.
  TruncatedSeries reciprocal() const {
    const Scalar& c0 = coeffs_[0];
    if (c0 == Scalar(0)) throw NonInvertibleError("series with zero constant term is not invertible");
    const Scalar inv0 = invert(c0);
    TruncatedSeries r(bound_);
    r.coeffs_[0] = inv0;
    for (int n = 1; n <= bound_; ++n) {
      Scalar acc(0);
      for (int j = 1; j <= n; ++j) acc += coeffs_[j] * r.coeffs_[n - j];
      r.coeffs_[n] = -(acc * inv0);
    }
    return r;
  }

  /// this(inner(S)); inner must have zero constant term.
  TruncatedSeries compose(const TruncatedSeries& inner) const {
    if (!(inner.coefficient(0) == Scalar(0))) {
      throw InputError("series composition requires an inner series without constant term");
    }
    const int b = std::min(bound_, inner.bound_);
    TruncatedSeries result(b);
    TruncatedSeries power(b);
    power.coeffs_[0] = Scalar(1);
    for (int j = 0; j <= b; ++j) {
      for (int i = 0; i <= b; ++i) result.coeffs_[i] += coeffs_[j] * power.coeffs_[i];
      power = power * inner.truncate(b);
    }
    return result;
  }

  TruncatedSeries& operator+=(const TruncatedSeries& o) {
    shrinkTo(o.bound_);
    for (int i = 0; i <= bound_; ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  TruncatedSeries& operator-=(const TruncatedSeries& o) {
    shrinkTo(o.bound_);
    for (int i = 0; i <= bound_; ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  TruncatedSeries& operator*=(const Scalar& c) {
    for (auto& x : coeffs_) x *= c;
    return *this;
  }

  friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
  friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
  friend TruncatedSeries operator*(TruncatedSeries a, const Scalar& c) { return a *= c; }
  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    const int bound = std::min(a.bound_, b.bound_);
    TruncatedSeries r(bound);
    for (int i = 0; i <= bound; ++i) {
      if (a.coeffs_[i] == Scalar(0)) continue;
      for (int j = 0; i + j <= bound; ++j) r.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return r;
  }
  friend TruncatedSeries operator/(const TruncatedSeries& a, const TruncatedSeries& b) {
    return a * b.reciprocal();
  }
  friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
    return a.bound_ == b.bound_ && a.coeffs_ == b.coeffs_;
  }

 private:
  static Scalar invert(const Scalar& x) { return x.inverse(); }
  void shrinkTo(int other) {
    if (other < bound_) {
      bound_ = other;
      coeffs_.resize(static_cast<std::size_t>(other) + 1);
    }
  }

  int bound_;
  std::vector<Scalar> coeffs_;
};

/// exp(S) truncated at degree k: coefficients 1/j!.
TruncatedSeries<Rational> exponentialSeries(int k);

/// Lifts a rational series into the cyclotomic ring of the given order.
TruncatedSeries<Cyclotomic> toCyclotomic(const TruncatedSeries<Rational>& s, int order = 1);

}  // namespace wem
