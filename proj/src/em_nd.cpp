#include "wem/em_nd.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <string>
#include <thread>

#include "wem/errors.hpp"
#include "wem/quadrature.hpp"

namespace wem {

namespace {

constexpr int kMaxSmoothness = 40;

double signOf(int power) { return power % 2 == 0 ? 1.0 : -1.0; }

// Calls fn on every multi-index in prod_i [0, bounds[i]], lexicographically.
template <class Fn>
void forEachIndex(const std::vector<int>& bounds, Fn&& fn) {
  Exponent b(bounds.size(), 0);
  for (int bound : bounds) {
    if (bound < 0) return;
  }
  while (true) {
    fn(static_cast<const Exponent&>(b));
    std::size_t i = b.size();
    while (i-- > 0) {
      if (++b[i] <= bounds[i]) break;
      b[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) return;
  }
}

// Places a polynomial's variables at offset.. in a ring of `total` variables.
MultiPolynomial lift(const MultiPolynomial& p, int total, int offset) {
  std::vector<MultiPolynomial> subs;
  for (int i = 0; i < p.variableCount(); ++i) subs.push_back(MultiPolynomial::variable(total, offset + i));
  return p.compose(subs);
}

MultiPolynomial determinant(const std::vector<std::vector<MultiPolynomial>>& m, int vars) {
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  MultiPolynomial acc(vars);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::vector<MultiPolynomial>> minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<MultiPolynomial> row;
      for (std::size_t c = 0; c < n; ++c) {
        if (c != j) row.push_back(m[i][c]);
      }
      minor.push_back(std::move(row));
    }
    const MultiPolynomial term = m[0][j] * determinant(minor, vars);
    if (j % 2 == 0) {
      acc += term;
    } else {
      acc -= term;
    }
  }
  return acc;
}

void triangulateFace(const Polytope& polytope, int face, std::map<int, std::vector<std::vector<int>>>& memo) {
  if (memo.count(face)) return;
  const Face& f = polytope.faces()[static_cast<std::size_t>(face)];
  std::vector<std::vector<int>> out;
  if (polytope.dimension() - f.codimension() == 0) {
    out.push_back({f.vertices.front()});
  } else {
    const int w = *std::min_element(f.vertices.begin(), f.vertices.end());
    for (int j = 0; j < polytope.facetCount(); ++j) {
      if (std::binary_search(f.facets.begin(), f.facets.end(), j)) continue;
      IndexSet facets = f.facets;
      facets.insert(std::lower_bound(facets.begin(), facets.end(), j), j);
      const auto g = polytope.findFace(facets);
      if (!g) continue;
      const auto& gv = polytope.faces()[static_cast<std::size_t>(*g)].vertices;
      if (std::find(gv.begin(), gv.end(), w) != gv.end()) continue;
      triangulateFace(polytope, *g, memo);
      for (const auto& simplex : memo.at(*g)) {
        std::vector<int> s{w};
        s.insert(s.end(), simplex.begin(), simplex.end());
        out.push_back(std::move(s));
      }
    }
  }
  memo.emplace(face, std::move(out));
}

// Numeric coefficients of an operator polynomial, index = power of S.
std::vector<std::complex<double>> numericCoefficients(const OperatorPolynomial& op) {
  std::vector<std::complex<double>> out;
  for (int j = 0; j <= op.coefficients.degreeBound(); ++j) out.push_back(op.numericCoefficient(j));
  return out;
}

std::complex<double> coefficientAt(const std::vector<std::complex<double>>& c, int j) {
  return j < static_cast<int>(c.size()) ? c[static_cast<std::size_t>(j)] : std::complex<double>(0.0);
}

// Operators keyed by (weight, rotation), built once so that worker threads only read.
class OperatorCache {
 public:
  OperatorCache(int k) : k_(k) {}
  const OperatorPolynomial& get(const Rational& q, const Rational& rotation) {
    const auto key = std::make_pair(q, rotation);
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, eulerMaclaurinOperator(q, RootOfUnity(rotation), k_)).first;
    return it->second;
  }

 private:
  int k_;
  std::map<std::pair<Rational, Rational>, OperatorPolynomial> cache_;
};

void checkSmoothness(int n, int k) {
  if (k <= 1) throw InputError("Euler-Maclaurin order must exceed 1");
  if (n * k > kMaxSmoothness) throw InputError("function lacks the requested smoothness");
}

// (1/|Gamma|) sum_gamma prod_i N_{q_i}^{k, lambda_{gamma,i}}(d/dh_i) G at 0, with d^b G from `derivative`.
std::complex<double> coneMainTerm(const std::vector<std::vector<Rational>>& characters, const std::vector<Rational>& q,
                                  OperatorCache& ops, const std::function<std::complex<double>(const Exponent&)>& derivative) {
  std::complex<double> acc = 0.0;
  for (const auto& rot : characters) {
    std::vector<std::vector<std::complex<double>>> coeffs;
    std::vector<int> bounds;
    for (std::size_t s = 0; s < rot.size(); ++s) {
      coeffs.push_back(numericCoefficients(ops.get(q[s], rot[s])));
      bounds.push_back(static_cast<int>(coeffs.back().size()) - 1);
    }
    forEachIndex(bounds, [&](const Exponent& b) {
      std::complex<double> c = 1.0;
      for (std::size_t s = 0; s < b.size(); ++s) c *= coeffs[s][static_cast<std::size_t>(b[s])];
      if (c != 0.0) acc += c * derivative(b);
    });
  }
  return acc / static_cast<double>(characters.size());
}

// Memoized d^b G for one cone.
class DerivativeTable {
 public:
  explicit DerivativeTable(const OrthantIntegrals& integrals) : integrals_(&integrals) {}
  std::complex<double> operator()(const Exponent& b) {
    auto it = values_.find(b);
    if (it == values_.end()) it = values_.emplace(b, integrals_->derivative(b)).first;
    return it->second;
  }

 private:
  const OrthantIntegrals* integrals_;
  std::map<Exponent, std::complex<double>> values_;
};

// int_{-1}^{1} |phi^{(m)}(t)| dt for the standard bump.
double standardBumpL1(int m) {
  static std::mutex mutex;
  static std::map<int, double> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;
  const auto r = integratePieces([m](double t) { return std::complex<double>(std::abs(standardBumpDerivative(m, t))); },
                                 {-1.0, -0.5, 0.0, 0.5, 1.0}, 1e-10);
  cache.emplace(m, r.value.real());
  return r.value.real();
}

}  // namespace

int threadCount() {
  if (const char* env = std::getenv("WEM_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
}

void parallelFor(int count, const std::function<void(int)>& fn) {
  const int workers = std::min(count, threadCount());
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex mutex;
  auto run = [&] {
    while (true) {
      const int i = next++;
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> threads;
  for (int t = 0; t < workers; ++t) threads.emplace_back(run);
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<std::vector<int>> pullingTriangulation(const Polytope& polytope) {
  std::map<int, std::vector<std::vector<int>>> memo;
  triangulateFace(polytope, 0, memo);
  return memo.at(0);
}

VolumePolynomial volumePolynomial(const Polytope& polytope, const MultiPolynomial& p) {
  const int n = polytope.dimension(), d = polytope.facetCount();
  if (p.variableCount() != n) throw InputError("polynomial arity must match the dimension");
  const int total = d + n;
  VolumePolynomial out{MultiPolynomial(d), pullingTriangulation(polytope)};

  std::vector<std::vector<MultiPolynomial>> moved;
  for (int v = 0; v < static_cast<int>(polytope.vertices().size()); ++v) moved.push_back(polytope.dilatedVertex(v));
  const std::vector<Rational> origin(static_cast<std::size_t>(d), Rational(0));

  for (const auto& simplex : out.simplices) {
    const auto& w0 = moved[static_cast<std::size_t>(simplex[0])];
    std::vector<std::vector<MultiPolynomial>> jac;
    for (int i = 1; i <= n; ++i) {
      std::vector<MultiPolynomial> row;
      const auto& wi = moved[static_cast<std::size_t>(simplex[static_cast<std::size_t>(i)])];
      for (int c = 0; c < n; ++c) row.push_back(wi[static_cast<std::size_t>(c)] - w0[static_cast<std::size_t>(c)]);
      jac.push_back(std::move(row));
    }
    MultiPolynomial det = determinant(jac, d);
    const int sgn = det.evaluate(std::span<const Rational>(origin)).sign();
    if (sgn == 0) throw ConsistencyError("degenerate simplex in the pulling triangulation");
    if (sgn < 0) det = -det;

    // x = w0(h) + sum_i t_i (w_i(h) - w0(h)), t in variables d..d+n-1
    std::vector<MultiPolynomial> x;
    for (int c = 0; c < n; ++c) {
      MultiPolynomial xc = lift(w0[static_cast<std::size_t>(c)], total, 0);
      for (int i = 0; i < n; ++i) xc += MultiPolynomial::variable(total, d + i) * lift(jac[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)], total, 0);
      x.push_back(std::move(xc));
    }
    const MultiPolynomial composed = p.compose(x);

    MultiPolynomial integral(d);
    for (const auto& [e, coeff] : composed.terms()) {
      Rational weight = coeff;
      int degree = 0;
      for (int i = 0; i < n; ++i) {
        const int a = e[static_cast<std::size_t>(d + i)];
        weight *= factorial(a);
        degree += a;
      }
      weight /= factorial(n + degree);
      integral.addTerm(Exponent(e.begin(), e.begin() + d), weight);
    }
    out.polynomial += integral * det;
  }
  return out;
}

Cyclotomic applyOperators(const MultiPolynomial& volume, const std::vector<OperatorPolynomial>& ops, int ambientOrder) {
  if (static_cast<int>(ops.size()) != volume.variableCount()) throw InputError("one operator per facet is required");
  Cyclotomic acc(Rational(0), ambientOrder);
  for (const auto& [a, c] : volume.terms()) {
    Rational scale = c;
    bool vanishes = false;
    for (std::size_t j = 0; j < a.size() && !vanishes; ++j) {
      if (a[j] > ops[j].coefficients.degreeBound()) vanishes = true;
      scale *= factorial(a[j]);
    }
    if (vanishes) continue;
    Cyclotomic term(scale, ambientOrder);
    for (std::size_t j = 0; j < a.size(); ++j) term *= ops[j].coefficients.coefficient(a[j]);
    acc += term;
  }
  return acc;
}

std::vector<OperatorPolynomial> faceOperators(const GroupData& groups, int face, int element, const Rational& q, int k) {
  const Polytope& polytope = groups.polytope();
  const Face& f = polytope.faces().at(static_cast<std::size_t>(face));
  std::vector<OperatorPolynomial> ops;
  for (int j = 0; j < polytope.facetCount(); ++j) {
    ops.push_back(eulerMaclaurinOperator(q, groups.character(face, element, j), k));
    if (std::binary_search(f.facets.begin(), f.facets.end(), j) && !ops.back().coefficients.coefficient(0).isZero()) {
      throw ConsistencyError("face operator on a facet of its face has a constant term");
    }
  }
  return ops;
}

MainTermResult mainTermPolynomial(const Polytope& polytope, const GroupData& groups, const MultiPolynomial& p,
                                  const Rational& q, int k) {
  if (k <= 1) throw InputError("Euler-Maclaurin order must exceed 1");
  const VolumePolynomial volume = volumePolynomial(polytope, p);
  const int d = polytope.facetCount();
  const int ambient = groups.ambientOrder();

  std::vector<Contribution> contributions;
  OperatorCache cache(k);
  std::vector<std::vector<const OperatorPolynomial*>> taskOps;
  for (int fi = 0; fi < static_cast<int>(polytope.faces().size()); ++fi) {
    const Face& face = polytope.faces()[static_cast<std::size_t>(fi)];
    for (int e : groups.flat(fi)) {
      Contribution c;
      c.face = fi;
      c.facets = face.facets;
      c.element = groups.group(fi).elements[static_cast<std::size_t>(e)].coordinates;
      std::vector<const OperatorPolynomial*> ops;
      for (int j = 0; j < d; ++j) {
        ops.push_back(&cache.get(q, groups.rotation(fi, e, j)));
        if (std::binary_search(face.facets.begin(), face.facets.end(), j) && !ops.back()->coefficients.coefficient(0).isZero()) {
          throw ConsistencyError("face operator on a facet of its face has a constant term");
        }
      }
      contributions.push_back(std::move(c));
      taskOps.push_back(std::move(ops));
    }
  }

  parallelFor(static_cast<int>(contributions.size()), [&](int i) {
    std::vector<OperatorPolynomial> ops;
    for (const auto* op : taskOps[static_cast<std::size_t>(i)]) ops.push_back(*op);
    auto& c = contributions[static_cast<std::size_t>(i)];
    c.exact = applyOperators(volume.polynomial, ops, ambient);
    c.numeric = c.exact.toComplex();
  });

  std::sort(contributions.begin(), contributions.end(), [](const Contribution& a, const Contribution& b) {
    return std::tie(a.facets, a.element) < std::tie(b.facets, b.element);
  });
  MainTermResult out;
  out.k = k;
  out.total = Cyclotomic(Rational(0), ambient);
  for (const auto& c : contributions) out.total += c.exact;
  const auto value = isRational(out.total);
  if (!value) throw ConsistencyError("main term is not rational");
  out.value = *value;
  out.contributions = std::move(contributions);
  return out;
}

Rational exactPolynomialSum(const Polytope& polytope, const GroupData& groups, const MultiPolynomial& p,
                            const Rational& q) {
  const int k = std::max(p.totalDegree(), 0) + polytope.dimension() + 1;
  return mainTermPolynomial(polytope, groups, p, q, k).value;
}

Rational regularMainTerm(const Polytope& polytope, const MultiPolynomial& p, const Rational& q) {
  if (!polytope.isRegular()) throw InputError("the fast path needs a regular polytope");
  const int k = std::max(p.totalDegree(), 0) + polytope.dimension() + 1;
  const auto chi = chiSeries(q, 2 * (k / 2));
  const VolumePolynomial volume = volumePolynomial(polytope, p);
  Rational acc(0);
  for (const auto& [a, c] : volume.polynomial.terms()) {
    Rational term = c;
    for (int aj : a) term *= factorial(aj) * chi.coefficient(aj);
    acc += term;
  }
  return acc;
}

std::vector<std::vector<Rational>> coneCharacters(const Cone& cone) {
  IntMatrix u;
  for (const auto& row : cone.normals) {
    std::vector<long> r;
    for (const auto& c : row) {
      if (!c.isInteger()) throw InputError("cone normals must be integral");
      r.push_back(c.numerator().get_si());
    }
    u.push_back(std::move(r));
  }
  const SmithForm snf = smithNormalForm(u);
  const std::size_t n = cone.normals.size();
  std::vector<long> factors;
  std::vector<Vector> generators;
  for (std::size_t t = 0; t < snf.diagonal.size(); ++t) {
    if (snf.diagonal[t] == 0) throw InputError("cone normals are linearly dependent");
    if (snf.diagonal[t] < 2) continue;
    factors.push_back(snf.diagonal[t]);
    Vector g;
    for (long c : snf.columnInverse[t]) g.emplace_back(c);
    generators.push_back(std::move(g));
  }

  std::vector<std::vector<Rational>> out;
  std::vector<int> bounds;
  for (long f : factors) bounds.push_back(static_cast<int>(f) - 1);
  forEachIndex(bounds, [&](const Exponent& c) {
    Vector lift(n, Rational(0));
    for (std::size_t g = 0; g < c.size(); ++g) {
      for (std::size_t i = 0; i < n; ++i) lift[i] += Rational(c[g]) * generators[g][i];
    }
    std::vector<Rational> rot;
    for (const auto& e : cone.edges) rot.push_back(dot(lift, e).fractionalPart());
    out.push_back(std::move(rot));
  });
  return out;
}

OrthantIntegrals::OrthantIntegrals(const Cone& cone, const SmoothFunction& f)
    : cone_(&cone), f_(&f), exactEdges_(cone.edges) {
  const std::size_t n = cone.apex.size();
  if (static_cast<std::size_t>(f.dimension()) != n) throw InputError("function dimension must match the cone");
  for (const auto& c : cone.apex) apex_.push_back(c.toDouble());
  for (const auto& e : cone.edges) {
    std::vector<double> row;
    for (const auto& c : e) row.push_back(c.toDouble());
    edges_.push_back(std::move(row));
  }
  for (const auto& u : cone.normals) {
    std::vector<double> row;
    double lo = 0.0, hi = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double c = u[k].toDouble();
      row.push_back(c);
      const double a = c * (f.lo(static_cast<int>(k)) - apex_[k]);
      const double b = c * (f.hi(static_cast<int>(k)) - apex_[k]);
      lo += std::min(a, b);
      hi += std::max(a, b);
    }
    normals_.push_back(std::move(row));
    tLo_.push_back(std::max(lo, 0.0));
    tHi_.push_back(hi);
  }
}

std::complex<double> OrthantIntegrals::derivative(const Exponent& b) const {
  const std::size_t n = b.size();
  Exponent c(n, 0);
  std::vector<bool> free(n, false);
  double s = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (b[i] == 0) {
      free[i] = true;
    } else {
      c[i] = b[i] - 1;
      s *= signOf(b[i] - 1);
    }
  }
  return s * integral(c, free, std::vector<const PeriodizedKernel*>(n, nullptr));
}

std::complex<double> OrthantIntegrals::integral(const Exponent& c, const std::vector<bool>& free,
                                                const std::vector<const PeriodizedKernel*>& kernels) const {
  if (f_->isZero()) return 0.0;
  const std::size_t n = apex_.size();
  std::vector<std::size_t> vars;
  for (std::size_t i = 0; i < n; ++i) {
    if (free[i]) {
      if (!(tHi_[i] > tLo_[i])) return 0.0;
      vars.push_back(i);
    }
  }
  const auto combination = directionalExpansion(exactEdges_, c);
  std::vector<double> t(n, 0.0), x(n);

  // absolute tolerances from a sampled sup of the integrand over the support box
  double sup = 0.0;
  {
    constexpr int kSamples = 9;
    std::vector<int> idx(n, 0);
    while (true) {
      for (std::size_t k = 0; k < n; ++k) {
        const double lo = f_->lo(static_cast<int>(k)), hi = f_->hi(static_cast<int>(k));
        x[k] = lo + (hi - lo) * (idx[k] + 0.5) / kSamples;
      }
      sup = std::max(sup, std::abs(f_->partials(combination, x)));
      std::size_t k = n;
      while (k-- > 0) {
        if (++idx[k] < kSamples) break;
        idx[k] = 0;
      }
      if (k == static_cast<std::size_t>(-1)) break;
    }
  }
  std::vector<double> levelScale(vars.size() + 1, sup);
  for (std::size_t l = vars.size(); l-- > 0;) levelScale[l] = levelScale[l + 1] * (tHi_[vars[l]] - tLo_[vars[l]]);

  auto point = [&]() -> std::complex<double> {
    for (std::size_t k = 0; k < n; ++k) {
      x[k] = apex_[k];
      for (std::size_t i : vars) x[k] += t[i] * edges_[i][k];
    }
    std::complex<double> w = f_->partials(combination, x);
    for (std::size_t i : vars) {
      if (kernels[i]) w *= (*kernels[i])(t[i]);
    }
    return w;
  };

  std::function<std::complex<double>(std::size_t)> nest = [&](std::size_t level) -> std::complex<double> {
    if (level == vars.size()) return point();
    const std::size_t i = vars[level];
    double lo = tLo_[i], hi = tHi_[i];
    const bool inner = level + 1 == vars.size();
    if (inner) {
      // exact slab of the support box along the last edge
      for (std::size_t k = 0; k < n; ++k) {
        double base = apex_[k];
        for (std::size_t j : vars) {
          if (j != i) base += t[j] * edges_[j][k];
        }
        const double a = edges_[i][k];
        const double boxLo = f_->lo(static_cast<int>(k)), boxHi = f_->hi(static_cast<int>(k));
        if (a == 0.0) {
          if (base <= boxLo || base >= boxHi) return 0.0;
          continue;
        }
        const double s1 = (boxLo - base) / a, s2 = (boxHi - base) / a;
        lo = std::max(lo, std::min(s1, s2));
        hi = std::min(hi, std::max(s1, s2));
      }
    }
    if (!(hi > lo)) return 0.0;
    const std::vector<double> breaks = kernels[i] ? integerBreakpoints(lo, hi) : std::vector<double>{lo, hi};
    const double eps = inner ? 1e-14 : 1e-13;
    const auto r = integrateAdaptive(
        [&](double s) {
          t[i] = s;
          return nest(level + 1);
        },
        breaks, eps * levelScale[level], eps);
    if (level == 0) error_ += r.error;
    return r.value;
  };
  return nest(0);
}

ConeEMResult coneEM(const Cone& cone, const std::vector<Rational>& q, const SmoothFunction& f, int k,
                    bool integralRemainder) {
  const int n = static_cast<int>(cone.normals.size());
  checkSmoothness(n, k);
  if (static_cast<int>(q.size()) != n) throw InputError("weight tuple size must match the cone's facets");
  const OrthantIntegrals integrals(cone, f);
  DerivativeTable table(integrals);
  const auto characters = coneCharacters(cone);
  OperatorCache ops(k);

  ConeEMResult r;
  r.groupOrder = static_cast<long>(characters.size());
  r.weightedSum = coneWeightedSum(cone, q, f);
  r.mainTerm = coneMainTerm(characters, q, ops, [&](const Exponent& b) { return table(b); });
  r.remainderByDifference = r.weightedSum - r.mainTerm;
  r.remainderByIntegral = std::numeric_limits<double>::quiet_NaN();

  if (integralRemainder) {
    std::complex<double> acc = 0.0;
    for (const auto& rot : characters) {
      std::vector<PeriodizedKernel> kernels;
      std::vector<std::vector<std::complex<double>>> coeffs;
      for (int s = 0; s < n; ++s) {
        kernels.push_back(eulerMaclaurinKernel(k, RootOfUnity(rot[static_cast<std::size_t>(s)])));
        coeffs.push_back(numericCoefficients(ops.get(q[static_cast<std::size_t>(s)], rot[static_cast<std::size_t>(s)])));
      }
      // expand prod_i (main_i + remainder_i) and keep every product with a remainder factor
      for (unsigned mask = 0; mask + 1 < (1u << n); ++mask) {
        std::vector<int> bounds;
        int outside = 0;
        for (int s = 0; s < n; ++s) {
          const bool inI = (mask >> s) & 1u;
          bounds.push_back(inI ? static_cast<int>(coeffs[static_cast<std::size_t>(s)].size()) - 1 : 0);
          if (!inI) ++outside;
        }
        const double sgn = signOf((k - 1) * outside);
        forEachIndex(bounds, [&](const Exponent& b) {
          std::complex<double> coef = sgn;
          Exponent c(static_cast<std::size_t>(n), 0);
          std::vector<bool> free(static_cast<std::size_t>(n), false);
          std::vector<const PeriodizedKernel*> weights(static_cast<std::size_t>(n), nullptr);
          for (int s = 0; s < n; ++s) {
            const auto su = static_cast<std::size_t>(s);
            if (!((mask >> s) & 1u)) {
              c[su] = k;
              free[su] = true;
              weights[su] = &kernels[su];
            } else if (b[su] == 0) {
              coef *= coeffs[su][0];
              free[su] = true;
            } else {
              coef *= coeffs[su][static_cast<std::size_t>(b[su])] * signOf(b[su] - 1);
              c[su] = b[su] - 1;
            }
          }
          if (coef != 0.0) acc += coef * integrals.integral(c, free, weights);
        });
      }
    }
    r.remainderByIntegral = acc / static_cast<double>(characters.size());
  }
  r.quadratureError = integrals.quadratureError();
  return r;
}

EMNDResult smoothEM(const Polytope& polytope, const GroupData& groups, const SmoothFunction& f, const Rational& q,
                    int k, const Polarization& polarization) {
  const int n = polytope.dimension(), d = polytope.facetCount();
  checkSmoothness(n, k);
  if (f.dimension() != n) throw InputError("function dimension must match the polytope");
  const auto& vertices = polytope.vertices();
  const std::size_t nv = vertices.size();

  OperatorCache ops(k);
  EMNDResult r;
  r.q = q;
  r.k = k;
  r.xi = polarization.xi;

  // face/group operators, numerically
  struct Task {
    int face;
    std::vector<std::vector<std::complex<double>>> coeffs;  // per facet
  };
  std::vector<Task> tasks;
  int maxDegree = 0;
  for (int fi = 0; fi < static_cast<int>(polytope.faces().size()); ++fi) {
    for (int e : groups.flat(fi)) {
      Task t{fi, {}};
      for (int j = 0; j < d; ++j) {
        t.coeffs.push_back(numericCoefficients(ops.get(q, groups.rotation(fi, e, j))));
        maxDegree = std::max(maxDegree, static_cast<int>(t.coeffs.back().size()) - 1);
      }
      tasks.push_back(std::move(t));
      Contribution c;
      c.face = fi;
      c.facets = polytope.faces()[static_cast<std::size_t>(fi)].facets;
      c.element = groups.group(fi).elements[static_cast<std::size_t>(e)].coordinates;
      r.contributions.push_back(std::move(c));
    }
  }

  // polarized cones and their own groups
  std::vector<Cone> cones;
  std::vector<std::vector<std::vector<Rational>>> characters;
  for (const auto& pv : polarization.vertices) {
    cones.push_back(polytope.polarizedCone(pv));
    characters.push_back(coneCharacters(cones.back()));
    const auto weights = pv.weights(q);
    for (const auto& rot : characters.back()) {
      for (std::size_t s = 0; s < rot.size(); ++s) {
        maxDegree = std::max(maxDegree, ops.get(weights[s], rot[s]).coefficients.degreeBound());
      }
    }
  }

  // d^b G_v at 0 for every vertex and b in [0, maxDegree]^n
  std::vector<std::map<Exponent, std::complex<double>>> tables(nv);
  std::vector<double> errors(nv, 0.0);
  parallelFor(static_cast<int>(nv), [&](int v) {
    const OrthantIntegrals integrals(cones[static_cast<std::size_t>(v)], f);
    forEachIndex(std::vector<int>(static_cast<std::size_t>(n), maxDegree), [&](const Exponent& b) {
      tables[static_cast<std::size_t>(v)].emplace(b, integrals.derivative(b));
    });
    errors[static_cast<std::size_t>(v)] = integrals.quadratureError();
  });

  auto faceTerm = [&](const Task& task, bool restricted) {
    const Face& face = polytope.faces()[static_cast<std::size_t>(task.face)];
    std::complex<double> acc = 0.0;
    for (std::size_t v = 0; v < nv; ++v) {
      if (restricted && std::find(face.vertices.begin(), face.vertices.end(), static_cast<int>(v)) == face.vertices.end()) {
        continue;
      }
      const auto& vertex = vertices[v];
      const auto& pv = polarization.vertices[v];
      std::complex<double> outside = 1.0;
      for (int j = 0; j < d; ++j) {
        if (vertex.slot(j) < 0) outside *= coefficientAt(task.coeffs[static_cast<std::size_t>(j)], 0);
      }
      if (outside == 0.0) continue;
      std::complex<double> inner = 0.0;
      for (const auto& [b, value] : tables[v]) {
        std::complex<double> c = 1.0;
        for (std::size_t s = 0; s < b.size() && c != 0.0; ++s) {
          c *= coefficientAt(task.coeffs[static_cast<std::size_t>(vertex.facets[s])], b[s]);
          if (pv.signs[s] < 0) c *= signOf(b[s]);
        }
        if (c != 0.0) inner += c * value;
      }
      const double order = static_cast<double>(groups.group(groups.vertexFace(static_cast<int>(v))).order());
      acc += signOf(pv.flips) * outside * inner / order;
    }
    return acc;
  };

  for (std::size_t i = 0; i < tasks.size(); ++i) {
    r.contributions[i].numeric = faceTerm(tasks[i], false);
    r.mainTerm += r.contributions[i].numeric;
    r.restrictedMainTerm += faceTerm(tasks[i], true);
  }
  std::sort(r.contributions.begin(), r.contributions.end(), [](const Contribution& a, const Contribution& b) {
    return std::tie(a.facets, a.element) < std::tie(b.facets, b.element);
  });

  r.weightedSum = weightedLatticeSum(polytope, f, q);
  r.remainderByDifference = r.weightedSum - r.mainTerm;

  for (std::size_t v = 0; v < nv; ++v) {
    const auto& pv = polarization.vertices[v];
    const auto weights = pv.weights(q);
    const std::complex<double> main = coneMainTerm(characters[v], weights, ops, [&](const Exponent& b) {
      return tables[v].at(b);
    });
    const double sum = coneWeightedSum(cones[v], weights, f);
    r.vertexRouteMainTerm += signOf(pv.flips) * main;
    r.remainderByCones += signOf(pv.flips) * (sum - main);
    r.quadratureError += errors[v];
  }
  return r;
}

double partialL1Norm(const SmoothFunction& f, const Exponent& beta) {
  if (f.isZero()) return 0.0;
  const int n = f.dimension();
  if (const auto c = f.constantMultiplier()) {
    double acc = std::abs(*c);
    for (int i = 0; i < n; ++i) {
      const double r = f.radius()[static_cast<std::size_t>(i)];
      const int m = beta[static_cast<std::size_t>(i)];
      acc *= standardBumpL1(m) * std::pow(r, 1 - m);
    }
    return acc;
  }
  std::vector<double> x(static_cast<std::size_t>(n));
  std::function<double(int)> nest = [&](int level) -> double {
    if (level == n) return std::abs(f.partial(beta, x));
    const auto r = integratePieces(
        [&](double s) {
          x[static_cast<std::size_t>(level)] = s;
          return std::complex<double>(nest(level + 1));
        },
        {f.lo(level), f.center()[static_cast<std::size_t>(level)], f.hi(level)}, level + 1 == n ? 1e-10 : 1e-8, 10u);
    return r.value.real();
  };
  return nest(0);
}

EstimateReport remainderEstimateReport(const Polytope& polytope, const GroupData& groups,
                                       const std::vector<std::pair<std::string, SmoothFunction>>& family,
                                       const Rational& q, int k, const Polarization& polarization) {
  const int n = polytope.dimension();
  EstimateReport report;
  report.q = q;
  report.k = k;
  bool first = true;
  for (const auto& [label, f] : family) {
    EstimateRow row;
    row.label = label;
    const EMNDResult em = smoothEM(polytope, groups, f, q, k, polarization);
    row.remainder = std::abs(em.remainderByDifference);
    std::vector<int> bounds(static_cast<std::size_t>(n), n * k);
    forEachIndex(bounds, [&](const Exponent& j) {
      int order = 0;
      for (int c : j) order += c;
      if (order < k || order > n * k) return;
      row.derivativeNorm = std::max(row.derivativeNorm, partialL1Norm(f, j));
    });
    row.ratio = row.derivativeNorm > 0.0 ? row.remainder / row.derivativeNorm : 0.0;
    if (row.derivativeNorm > 0.0) {
      report.minRatio = first ? row.ratio : std::min(report.minRatio, row.ratio);
      report.maxRatio = first ? row.ratio : std::max(report.maxRatio, row.ratio);
      first = false;
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace wem
