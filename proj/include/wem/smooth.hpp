#pragma once

// Compactly supported C^infinity test functions with closed-form derivatives.

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "wem/multipoly.hpp"

namespace wem {

/// n-th derivative of the standard bump exp(-1/(1-t^2)) on (-1, 1), zero outside.
double standardBumpDerivative(int n, double t);

/// A univariate function given by its derivative evaluator, zero outside [lo, hi].
class Smooth1D {
 public:
  using Derivatives = std::function<double(int order, double x)>;

  Smooth1D(Derivatives derivatives, double lo, double hi, int smoothness);

  double operator()(double x) const { return derivative(0, x); }
  double derivative(int order, double x) const;
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  int smoothness() const { return smoothness_; }

 private:
  Derivatives derivatives_;
  double lo_, hi_;
  int smoothness_;
};

/// g(x) * bump((x - center) / radius), where multiplier(j, x) returns g^(j)(x).
Smooth1D bump1D(double center, double radius, Smooth1D::Derivatives multiplier);
Smooth1D bump1D(double center, double radius);

/// Multiplier helpers for bump1D.
Smooth1D::Derivatives polynomialMultiplier(std::vector<double> coefficients);
Smooth1D::Derivatives sineMultiplier(double frequency, double phase = 0.0);

/// p(x) * prod_i bump((x_i - c_i) / r_i) on R^n, with p a polynomial.
class SmoothFunction {
 public:
  SmoothFunction(std::vector<double> center, std::vector<double> radius, const MultiPolynomial& multiplier);
  SmoothFunction(std::vector<double> center, std::vector<double> radius);
  /// The zero function on R^n.
  static SmoothFunction zero(int dimension);

  int dimension() const { return static_cast<int>(center_.size()); }
  const std::vector<double>& center() const { return center_; }
  const std::vector<double>& radius() const { return radius_; }
  bool isZero() const { return terms_.empty(); }
  /// The multiplier's value when it is a constant (the function is then a product of 1D bumps).
  std::optional<double> constantMultiplier() const;

  double operator()(std::span<const double> x) const { return partial(Exponent(center_.size(), 0), x); }
  /// The mixed partial derivative of multi-index beta.
  double partial(const Exponent& beta, std::span<const double> x) const;
  /// Weighted sum of partials, e.g. an expanded directional derivative.
  double partials(const std::vector<std::pair<Exponent, double>>& combination, std::span<const double> x) const;

  /// Closed support box.
  double lo(int i) const { return center_[static_cast<std::size_t>(i)] - radius_[static_cast<std::size_t>(i)]; }
  double hi(int i) const { return center_[static_cast<std::size_t>(i)] + radius_[static_cast<std::size_t>(i)]; }

 private:
  struct Term {
    Exponent exponent;
    double coefficient;
  };
  std::vector<double> center_, radius_;
  // all derivatives of the multiplier, keyed by derivative multi-index
  std::vector<std::pair<Exponent, std::vector<Term>>> multiplierDerivatives_;
  std::vector<Term> terms_;

  const std::vector<Term>* multiplierDerivative(const Exponent& gamma) const;
};

/// prod_i (alpha_i . grad)^{a_i} expanded into partials: list of (beta, coefficient).
std::vector<std::pair<Exponent, double>> directionalExpansion(const std::vector<std::vector<Rational>>& alphas,
                                                               const Exponent& a);

}  // namespace wem
