#include "wem/smooth.hpp"

#include <cmath>
#include <limits>

#include "wem/errors.hpp"

namespace wem {

namespace {

constexpr int kMaxBumpOrder = 40;

// phi^(n)(t) = P_n(t) / (1 - t^2)^{2n} * phi(t), with
// P_{n+1} = P_n' (1 - t^2)^2 + (4 n t (1 - t^2) - 2 t) P_n.
std::vector<std::vector<double>> bumpNumerators() {
  std::vector<std::vector<Rational>> exact{{Rational(1)}};
  for (int n = 0; n < kMaxBumpOrder; ++n) {
    const auto& p = exact.back();
    std::vector<Rational> next(p.size() + 3, Rational(0));
    for (std::size_t i = 1; i < p.size(); ++i) {
      const Rational d = p[i] * Rational(static_cast<long>(i));  // coefficient of t^{i-1} in P_n'
      next[i - 1] += d;
      next[i + 1] -= d * Rational(2);
      next[i + 3] += d;
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
      next[i + 1] += p[i] * Rational(4L * n - 2);
      next[i + 3] -= p[i] * Rational(4L * n);
    }
    while (next.size() > 1 && next.back().isZero()) next.pop_back();
    exact.push_back(std::move(next));
  }
  std::vector<std::vector<double>> out;
  for (const auto& p : exact) {
    std::vector<double> d;
    for (const auto& c : p) d.push_back(c.toDouble());
    out.push_back(std::move(d));
  }
  return out;
}

double horner(const std::vector<double>& c, double t) {
  double acc = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * t + c[i];
  return acc;
}

// phi^(n)((x - c) / r) / r^n
double scaledBump(int n, double x, double c, double r) {
  return standardBumpDerivative(n, (x - c) / r) / std::pow(r, n);
}

}  // namespace

double standardBumpDerivative(int n, double t) {
  static const auto numerators = bumpNumerators();
  if (n < 0 || n > kMaxBumpOrder) throw InputError("bump derivative order out of range");
  const double s = 1.0 - t * t;
  if (s <= 0.0) return 0.0;
  const double e = -1.0 / s - 2.0 * n * std::log(s);
  if (e < -745.0) return 0.0;
  return horner(numerators[static_cast<std::size_t>(n)], t) * std::exp(e);
}

Smooth1D::Smooth1D(Derivatives derivatives, double lo, double hi, int smoothness)
    : derivatives_(std::move(derivatives)), lo_(lo), hi_(hi), smoothness_(smoothness) {
  if (!(lo < hi)) throw InputError("support must be a non-empty interval");
  if (smoothness < 2) throw InputError("smooth functions need at least two derivatives");
}

double Smooth1D::derivative(int order, double x) const {
  if (order > smoothness_) throw InputError("derivative order exceeds smoothness");
  if (x <= lo_ || x >= hi_) return 0.0;
  return derivatives_(order, x);
}

Smooth1D bump1D(double center, double radius, Smooth1D::Derivatives multiplier) {
  if (!(radius > 0)) throw InputError("bump radius must be positive");
  auto d = [center, radius, g = std::move(multiplier)](int n, double x) {
    double acc = 0.0;
    double binom = 1.0;
    for (int j = 0; j <= n; ++j) {
      acc += binom * g(j, x) * scaledBump(n - j, x, center, radius);
      binom = binom * (n - j) / (j + 1);
    }
    return acc;
  };
  return Smooth1D(std::move(d), center - radius, center + radius, kMaxBumpOrder);
}

Smooth1D bump1D(double center, double radius) {
  return bump1D(center, radius, polynomialMultiplier({1.0}));
}

Smooth1D::Derivatives polynomialMultiplier(std::vector<double> coefficients) {
  return [c = std::move(coefficients)](int n, double x) {
    double acc = 0.0;
    for (std::size_t i = c.size(); i-- > static_cast<std::size_t>(n);) {
      double falling = 1.0;
      for (int j = 0; j < n; ++j) falling *= static_cast<double>(i) - j;
      acc = acc * x + c[i] * falling;
    }
    return acc;
  };
}

Smooth1D::Derivatives sineMultiplier(double frequency, double phase) {
  return [frequency, phase](int n, double x) {
    return std::pow(frequency, n) * std::sin(frequency * x + phase + n * M_PI / 2);
  };
}

SmoothFunction::SmoothFunction(std::vector<double> center, std::vector<double> radius,
                               const MultiPolynomial& multiplier)
    : center_(std::move(center)), radius_(std::move(radius)) {
  if (center_.size() != radius_.size() || center_.empty()) throw InputError("bump center/radius mismatch");
  if (multiplier.variableCount() != dimension()) throw InputError("multiplier arity mismatch");
  for (double r : radius_) {
    if (!(r > 0)) throw InputError("bump radius must be positive");
  }
  if (multiplier.isZero()) return;
  for (const auto& [e, c] : multiplier.terms()) terms_.push_back({e, c.toDouble()});

  // enumerate every derivative multi-index up to the per-variable degrees
  const int n = dimension();
  Exponent bound(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) bound[static_cast<std::size_t>(i)] = multiplier.degreeIn(i);
  Exponent gamma(static_cast<std::size_t>(n), 0);
  while (true) {
    MultiPolynomial d = multiplier;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < gamma[static_cast<std::size_t>(i)]; ++j) d = d.derivative(i);
    }
    std::vector<Term> ts;
    for (const auto& [e, c] : d.terms()) ts.push_back({e, c.toDouble()});
    multiplierDerivatives_.emplace_back(gamma, std::move(ts));
    int i = 0;
    while (i < n && gamma[static_cast<std::size_t>(i)] == bound[static_cast<std::size_t>(i)]) {
      gamma[static_cast<std::size_t>(i)] = 0;
      ++i;
    }
    if (i == n) break;
    ++gamma[static_cast<std::size_t>(i)];
  }
}

SmoothFunction::SmoothFunction(std::vector<double> center, std::vector<double> radius)
    : SmoothFunction(center, radius, MultiPolynomial::constant(static_cast<int>(center.size()), Rational(1))) {}

SmoothFunction SmoothFunction::zero(int dimension) {
  return SmoothFunction(std::vector<double>(static_cast<std::size_t>(dimension), 0.0),
                        std::vector<double>(static_cast<std::size_t>(dimension), 1.0), MultiPolynomial(dimension));
}

const std::vector<SmoothFunction::Term>* SmoothFunction::multiplierDerivative(const Exponent& gamma) const {
  for (const auto& [g, ts] : multiplierDerivatives_) {
    if (g == gamma) return &ts;
  }
  return nullptr;
}

double SmoothFunction::partial(const Exponent& beta, std::span<const double> x) const {
  const int n = dimension();
  if (terms_.empty()) return 0.0;
  for (int i = 0; i < n; ++i) {
    if (x[static_cast<std::size_t>(i)] <= lo(i) || x[static_cast<std::size_t>(i)] >= hi(i)) return 0.0;
  }
  // bump factor derivatives per coordinate
  std::vector<std::vector<double>> bumps(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    for (int j = 0; j <= beta[ui]; ++j) bumps[ui].push_back(scaledBump(j, x[ui], center_[ui], radius_[ui]));
  }
  double total = 0.0;
  for (const auto& [gamma, ts] : multiplierDerivatives_) {
    double weight = 1.0;
    bool inRange = true;
    for (int i = 0; i < n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      if (gamma[ui] > beta[ui]) {
        inRange = false;
        break;
      }
      weight *= binomial(beta[ui], gamma[ui]).toDouble() * bumps[ui][static_cast<std::size_t>(beta[ui] - gamma[ui])];
    }
    if (!inRange || weight == 0.0) continue;
    double poly = 0.0;
    for (const auto& t : ts) {
      double m = t.coefficient;
      for (int i = 0; i < n; ++i) m *= std::pow(x[static_cast<std::size_t>(i)], t.exponent[static_cast<std::size_t>(i)]);
      poly += m;
    }
    total += weight * poly;
  }
  return total;
}

double SmoothFunction::partials(const std::vector<std::pair<Exponent, double>>& combination,
                                std::span<const double> x) const {
  double acc = 0.0;
  for (const auto& [beta, c] : combination) acc += c * partial(beta, x);
  return acc;
}

std::vector<std::pair<Exponent, double>> directionalExpansion(const std::vector<std::vector<Rational>>& alphas,
                                                               const Exponent& a) {
  if (alphas.size() != a.size()) throw InputError("direction count mismatch");
  const int n = alphas.empty() ? 0 : static_cast<int>(alphas[0].size());
  MultiPolynomial prod = MultiPolynomial::constant(n, Rational(1));
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    MultiPolynomial lin(n);
    for (int k = 0; k < n; ++k) lin += MultiPolynomial::variable(n, k) * alphas[i][static_cast<std::size_t>(k)];
    prod = prod * lin.pow(a[i]);
  }
  std::vector<std::pair<Exponent, double>> out;
  for (const auto& [e, c] : prod.terms()) out.emplace_back(e, c.toDouble());
  return out;
}

std::optional<double> SmoothFunction::constantMultiplier() const {
  if (terms_.empty()) return 0.0;
  if (terms_.size() != 1) return std::nullopt;
  for (int e : terms_[0].exponent) {
    if (e != 0) return std::nullopt;
  }
  return terms_[0].coefficient;
}

}  // namespace wem
