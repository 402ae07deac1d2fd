#include "wem/multipoly.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>

#include "ratpoly.hpp"
#include "wem/errors.hpp"

namespace wem {

MultiPolynomial::MultiPolynomial(int variableCount) : nvars_(variableCount) {
  if (variableCount < 0) throw InputError("negative variable count");
}

MultiPolynomial MultiPolynomial::constant(int variableCount, const Rational& c) {
  MultiPolynomial p(variableCount);
  p.addTerm(Exponent(static_cast<std::size_t>(variableCount), 0), c);
  return p;
}

MultiPolynomial MultiPolynomial::variable(int variableCount, int index) {
  Exponent e(static_cast<std::size_t>(variableCount), 0);
  e.at(static_cast<std::size_t>(index)) = 1;
  return monomial(variableCount, std::move(e), Rational(1));
}

MultiPolynomial MultiPolynomial::monomial(int variableCount, Exponent exponents, const Rational& c) {
  if (static_cast<int>(exponents.size()) != variableCount) {
    throw InputError("monomial exponent length does not match variable count");
  }
  for (int x : exponents) {
    if (x < 0) throw InputError("negative exponent");
  }
  MultiPolynomial p(variableCount);
  p.addTerm(exponents, c);
  return p;
}

MultiPolynomial MultiPolynomial::univariate(const std::vector<Rational>& coefficients) {
  MultiPolynomial p(1);
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    p.addTerm({static_cast<int>(i)}, coefficients[i]);
  }
  return p;
}

int MultiPolynomial::totalDegree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
  return d;
}

int MultiPolynomial::degreeIn(int var) const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e[static_cast<std::size_t>(var)]);
  return d;
}

Rational MultiPolynomial::coefficient(const Exponent& e) const {
  const auto it = terms_.find(e);
  return it == terms_.end() ? Rational(0) : it->second;
}

std::vector<Rational> MultiPolynomial::univariateCoefficients() const {
  if (nvars_ != 1) throw InputError("univariateCoefficients on a multivariate polynomial");
  std::vector<Rational> out(static_cast<std::size_t>(totalDegree() + 1));
  for (const auto& [e, c] : terms_) out[static_cast<std::size_t>(e[0])] = c;
  if (terms_.empty()) out.clear();
  return out;
}

void MultiPolynomial::addTerm(const Exponent& e, const Rational& c) {
  if (c.isZero()) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second.isZero()) terms_.erase(it);
  }
}

MultiPolynomial MultiPolynomial::derivative(int var) const {
  MultiPolynomial r(nvars_);
  const auto v = static_cast<std::size_t>(var);
  for (const auto& [e, c] : terms_) {
    if (e[v] == 0) continue;
    Exponent f = e;
    f[v] -= 1;
    r.terms_.emplace(std::move(f), c * Rational(e[v]));
  }
  return r;
}

Rational MultiPolynomial::evaluate(std::span<const Rational> point) const {
  if (static_cast<int>(point.size()) != nvars_) throw InputError("evaluation point has wrong arity");
  Rational sum(0);
  for (const auto& [e, c] : terms_) {
    Rational t = c;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] != 0) t *= point[i].pow(e[i]);
    }
    sum += t;
  }
  return sum;
}

double MultiPolynomial::evaluate(std::span<const double> point) const {
  if (static_cast<int>(point.size()) != nvars_) throw InputError("evaluation point has wrong arity");
  double sum = 0.0;
  for (const auto& [e, c] : terms_) {
    double t = c.toDouble();
    for (std::size_t i = 0; i < e.size(); ++i) {
      for (int k = 0; k < e[i]; ++k) t *= point[i];
    }
    sum += t;
  }
  return sum;
}

MultiPolynomial MultiPolynomial::compose(std::span<const MultiPolynomial> substitutes) const {
  if (static_cast<int>(substitutes.size()) != nvars_) throw InputError("compose: wrong substitute count");
  const int target = substitutes.empty() ? 0 : substitutes[0].variableCount();
  for (const auto& s : substitutes) s.checkArity(substitutes[0]);
  // powers[i][k] = substitutes[i]^k, filled lazily
  std::vector<std::vector<MultiPolynomial>> powers(substitutes.size());
  for (std::size_t i = 0; i < substitutes.size(); ++i) {
    powers[i].push_back(constant(target, Rational(1)));
  }
  MultiPolynomial result(target);
  for (const auto& [e, c] : terms_) {
    MultiPolynomial t = constant(target, c);
    for (std::size_t i = 0; i < e.size(); ++i) {
      while (static_cast<int>(powers[i].size()) <= e[i]) {
        powers[i].push_back(powers[i].back() * substitutes[i]);
      }
      if (e[i] > 0) t = t * powers[i][static_cast<std::size_t>(e[i])];
    }
    result += t;
  }
  return result;
}

MultiPolynomial MultiPolynomial::pow(int exponent) const {
  if (exponent < 0) throw InputError("negative polynomial power");
  MultiPolynomial result = constant(nvars_, Rational(1));
  MultiPolynomial base = *this;
  while (exponent > 0) {
    if (exponent & 1) result = result * base;
    base = base * base;
    exponent >>= 1;
  }
  return result;
}

void MultiPolynomial::checkArity(const MultiPolynomial& o) const {
  if (o.nvars_ != nvars_) throw InputError("polynomials over different variable counts");
}

MultiPolynomial& MultiPolynomial::operator+=(const MultiPolynomial& o) {
  checkArity(o);
  for (const auto& [e, c] : o.terms_) addTerm(e, c);
  return *this;
}

MultiPolynomial& MultiPolynomial::operator-=(const MultiPolynomial& o) {
  checkArity(o);
  for (const auto& [e, c] : o.terms_) addTerm(e, -c);
  return *this;
}

MultiPolynomial& MultiPolynomial::operator*=(const Rational& c) {
  if (c.isZero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

MultiPolynomial operator*(const MultiPolynomial& a, const MultiPolynomial& b) {
  a.checkArity(b);
  MultiPolynomial r(a.nvars_);
  Exponent e(static_cast<std::size_t>(a.nvars_));
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      r.addTerm(e, ca * cb);
    }
  }
  return r;
}

namespace detail {

const RatPoly& cyclotomicCoefficients(int order) {
  static std::mutex mutex;
  static std::map<int, RatPoly> cache;
  if (order < 1) throw InputError("cyclotomic order must be positive");
  std::lock_guard lock(mutex);
  if (auto it = cache.find(order); it != cache.end()) return it->second;
  RatPoly p(static_cast<std::size_t>(order) + 1);
  p[0] = Rational(-1);
  p[static_cast<std::size_t>(order)] = Rational(1);
  for (int d = 1; d < order; ++d) {
    if (order % d != 0) continue;
    // divisors are smaller, so already cached (recursive computation under the same lock)
    RatPoly phi;
    if (auto it = cache.find(d); it != cache.end()) {
      phi = it->second;
    } else {
      // compute Phi_d without re-locking
      RatPoly q(static_cast<std::size_t>(d) + 1);
      q[0] = Rational(-1);
      q[static_cast<std::size_t>(d)] = Rational(1);
      for (int e = 1; e < d; ++e) {
        if (d % e == 0) q = divmod(q, cache.at(e)).first;
      }
      cache.emplace(d, q);
      phi = q;
    }
    auto [quot, rem] = divmod(p, phi);
    if (!rem.empty()) throw ConsistencyError("cyclotomic division left a remainder");
    p = quot;
  }
  return cache.emplace(order, p).first->second;
}

}  // namespace detail

MultiPolynomial cyclotomicPolynomial(int order) {
  return MultiPolynomial::univariate(detail::cyclotomicCoefficients(order));
}

}  // namespace wem
