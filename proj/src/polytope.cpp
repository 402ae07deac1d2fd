#include "wem/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "wem/errors.hpp"

namespace wem {

namespace {

// Calls fn on every size-m subset of {0..d-1} in lexicographic order.
template <class Fn>
void forEachSubset(int d, int m, Fn&& fn) {
  if (m > d) return;
  IndexSet idx(static_cast<std::size_t>(m));
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    fn(idx);
    int i = m - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == d - m + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < m; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j) - 1] + 1;
  }
}

std::string formatPoint(const Vector& p) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
  os << ")";
  return os.str();
}

int affineRank(const std::vector<const Point*>& pts) {
  if (pts.empty()) return -1;
  Matrix diffs;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    Vector d(pts[i]->size());
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = (*pts[i])[k] - (*pts[0])[k];
    diffs.push_back(std::move(d));
  }
  return rank(std::move(diffs));
}

long ceilToLong(const Rational& r) { return -Rational(-r).floor().get_si(); }

// Enumerates integer points of [lo, hi] (inclusive) in lexicographic order.
template <class Fn>
void forEachBoxPoint(const LatticePoint& lo, const LatticePoint& hi, Fn&& fn) {
  const std::size_t n = lo.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (lo[i] > hi[i]) return;
  }
  LatticePoint x = lo;
  while (true) {
    fn(std::as_const(x));
    std::size_t i = n;
    while (i-- > 0) {
      if (x[i] < hi[i]) {
        ++x[i];
        break;
      }
      x[i] = lo[i];
    }
    if (i == static_cast<std::size_t>(-1)) return;
  }
}

Vector toRational(const LatticePoint& x) {
  Vector r;
  r.reserve(x.size());
  for (long c : x) r.emplace_back(c);
  return r;
}

// Shared walk over cone lattice points inside a box: fn(point, weight).
template <class Fn>
void forEachConePoint(const Cone& cone, const std::vector<Rational>& q, const LatticePoint& lo, const LatticePoint& hi,
                      Fn&& fn) {
  if (q.size() != cone.normals.size()) throw InputError("weight tuple size must match the cone's facets");
  forEachBoxPoint(lo, hi, [&](const LatticePoint& x) {
    const Vector xr = toRational(x);
    const Vector t = cone.coordinates(xr);
    Rational w(1);
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (t[i].sign() < 0) return;
      if (t[i].isZero()) w *= q[i];
    }
    fn(x, w);
  });
}

void smoothBox(const SmoothFunction& f, LatticePoint& lo, LatticePoint& hi) {
  for (int i = 0; i < f.dimension(); ++i) {
    lo.push_back(static_cast<long>(std::ceil(f.lo(i))));
    hi.push_back(static_cast<long>(std::floor(f.hi(i))));
  }
}

std::vector<double> toDouble(const LatticePoint& x) {
  std::vector<double> out;
  for (long c : x) out.push_back(static_cast<double>(c));
  return out;
}

}  // namespace

int Vertex::slot(int facet) const {
  const auto it = std::find(facets.begin(), facets.end(), facet);
  return it == facets.end() ? -1 : static_cast<int>(it - facets.begin());
}

std::vector<Rational> PolarizedVertex::weights(const Rational& q) const {
  std::vector<Rational> out;
  for (std::size_t i = 0; i < signs.size(); ++i) out.push_back(weight(static_cast<int>(i), q));
  return out;
}

Cone Cone::fromNormals(Point apex, std::vector<Vector> normals) {
  const auto inv = inverse(normals);
  if (!inv) throw InputError("cone normals are linearly dependent");
  Cone c{std::move(apex), std::move(normals), {}};
  const std::size_t n = c.normals.size();
  for (std::size_t k = 0; k < n; ++k) {
    Vector e(n);
    for (std::size_t r = 0; r < n; ++r) e[r] = (*inv)[r][k];
    c.edges.push_back(std::move(e));
  }
  return c;
}

Vector Cone::coordinates(std::span<const Rational> x) const {
  Vector d(apex.size());
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = x[k] - apex[k];
  Vector t;
  for (const auto& u : normals) t.push_back(dot(u, d));
  return t;
}

Rational Polytope::slack(int i, std::span<const Rational> x) const {
  const auto& u = normals_[static_cast<std::size_t>(i)];
  Rational acc = offset(i);
  for (std::size_t k = 0; k < u.size(); ++k) acc += u[k] * x[k];
  return acc;
}

Polytope Polytope::validate(const HalfSpaceDescription& description) {
  Polytope p;
  p.description_ = description;
  const int n = description.dimension;
  const int d = static_cast<int>(description.halfspaces.size());
  if (n < 1) throw ValidationError("degenerate", "dimension must be at least 1");
  for (int i = 0; i < d; ++i) {
    const auto& h = description.halfspaces[static_cast<std::size_t>(i)];
    if (static_cast<int>(h.normal.size()) != n) {
      throw InputError("half-space " + std::to_string(i) + " has a normal of the wrong length");
    }
    long g = 0;
    for (long c : h.normal) g = std::gcd(g, c);
    if (g != 1) {
      throw ValidationError("non-primitive", "normal of half-space " + std::to_string(i) +
                                                 " is not primitive (gcd " + std::to_string(g) + ")");
    }
    Vector u;
    for (long c : h.normal) u.emplace_back(c);
    p.normals_.push_back(std::move(u));
  }
  if (d < n + 1) {
    throw ValidationError("unbounded", "need at least n+1 = " + std::to_string(n + 1) + " half-spaces");
  }
  if (rank(p.normals_) < n) {
    const auto line = nullSpace(p.normals_, n);
    throw ValidationError("unbounded", "contains the line through direction " + formatPoint(line.at(0)));
  }

  // recession cone {U y >= 0} must be {0}; its extreme rays have n-1 tight constraints
  forEachSubset(d, n - 1, [&](const IndexSet& s) {
    Matrix a;
    for (int i : s) a.push_back(p.normals_[static_cast<std::size_t>(i)]);
    std::vector<Vector> kernel = a.empty() ? nullSpace(Matrix{Vector(static_cast<std::size_t>(n), Rational(0))}, n)
                                           : nullSpace(a, n);
    if (kernel.size() != 1) return;
    for (int sgn : {1, -1}) {
      Vector y = kernel[0];
      for (auto& c : y) c *= Rational(sgn);
      bool feasible = true;
      for (const auto& u : p.normals_) {
        if (dot(u, y).sign() < 0) {
          feasible = false;
          break;
        }
      }
      if (feasible) throw ValidationError("unbounded", "recession direction " + formatPoint(y));
    }
  });

  // vertices
  forEachSubset(d, n, [&](const IndexSet& s) {
    Matrix a;
    Vector b;
    for (int i : s) {
      a.push_back(p.normals_[static_cast<std::size_t>(i)]);
      b.push_back(-p.offset(i));
    }
    const auto x = solve(a, b);
    if (!x) return;
    for (int i = 0; i < d; ++i) {
      if (p.slack(i, *x).sign() < 0) return;
    }
    for (const auto& v : p.vertices_) {
      if (v.location == *x) return;
    }
    Vertex v;
    v.location = *x;
    for (int i = 0; i < d; ++i) {
      if (p.slack(i, *x).isZero()) v.facets.push_back(i);
    }
    p.vertices_.push_back(std::move(v));
  });
  if (p.vertices_.empty()) throw ValidationError("empty", "the half-spaces have empty intersection");

  std::vector<const Point*> all;
  for (const auto& v : p.vertices_) all.push_back(&v.location);
  if (affineRank(all) < n) {
    throw ValidationError("not-full-dimensional", "vertices span an affine space of dimension " +
                                                      std::to_string(affineRank(all)) + " < " + std::to_string(n));
  }

  for (int i = 0; i < d; ++i) {
    std::vector<const Point*> onFacet;
    for (const auto& v : p.vertices_) {
      if (std::find(v.facets.begin(), v.facets.end(), i) != v.facets.end()) onFacet.push_back(&v.location);
    }
    if (affineRank(onFacet) < n - 1) {
      throw ValidationError("redundant", "half-space " + std::to_string(i) + " does not support a facet");
    }
    for (int j = 0; j < i; ++j) {
      const auto& a = description.halfspaces[static_cast<std::size_t>(i)];
      const auto& b = description.halfspaces[static_cast<std::size_t>(j)];
      if (a.normal == b.normal && a.offset == b.offset) {
        throw ValidationError("redundant", "half-space " + std::to_string(i) + " duplicates half-space " +
                                               std::to_string(j));
      }
    }
  }

  for (const auto& v : p.vertices_) {
    if (static_cast<int>(v.facets.size()) != n) {
      throw ValidationError("non-simple", "vertex " + formatPoint(v.location) + " lies on " +
                                              std::to_string(v.facets.size()) + " facets");
    }
  }
  for (const auto& v : p.vertices_) {
    for (const auto& c : v.location) {
      if (!c.isInteger()) throw ValidationError("non-integral", "vertex " + formatPoint(v.location) + " is not integral");
    }
  }

  // edge vectors: columns of the inverse of the active normal matrix
  for (auto& v : p.vertices_) {
    Matrix a;
    for (int i : v.facets) a.push_back(p.normals_[static_cast<std::size_t>(i)]);
    const auto inv = inverse(a);
    if (!inv) throw ConsistencyError("singular normal matrix at a simple vertex");
    for (int k = 0; k < n; ++k) {
      Vector e(static_cast<std::size_t>(n));
      for (int r = 0; r < n; ++r) e[static_cast<std::size_t>(r)] = (*inv)[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)];
      v.edges.push_back(std::move(e));
    }
  }

  // faces: every subset of every I_v
  std::set<std::pair<int, IndexSet>> keys;
  for (const auto& v : p.vertices_) {
    for (int m = 0; m <= n; ++m) {
      forEachSubset(n, m, [&](const IndexSet& pick) {
        IndexSet f;
        for (int k : pick) f.push_back(v.facets[static_cast<std::size_t>(k)]);
        keys.emplace(m, f);
      });
    }
  }
  for (const auto& [codim, facets] : keys) {
    Face f{facets, {}};
    for (int vi = 0; vi < static_cast<int>(p.vertices_.size()); ++vi) {
      const auto& vf = p.vertices_[static_cast<std::size_t>(vi)].facets;
      if (std::includes(vf.begin(), vf.end(), facets.begin(), facets.end())) f.vertices.push_back(vi);
    }
    p.faces_.push_back(std::move(f));
  }

  p.boxLo_.assign(static_cast<std::size_t>(n), 0);
  p.boxHi_.assign(static_cast<std::size_t>(n), 0);
  for (int k = 0; k < n; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    long lo = p.vertices_[0].location[uk].floor().get_si(), hi = lo;
    for (const auto& v : p.vertices_) {
      lo = std::min(lo, v.location[uk].floor().get_si());
      hi = std::max(hi, ceilToLong(v.location[uk]));
    }
    p.boxLo_[uk] = lo;
    p.boxHi_[uk] = hi;
  }
  return p;
}

std::optional<int> Polytope::findFace(const IndexSet& facets) const {
  for (std::size_t i = 0; i < faces_.size(); ++i) {
    if (faces_[i].facets == facets) return static_cast<int>(i);
  }
  return std::nullopt;
}

bool Polytope::isRegular() const {
  for (const auto& v : vertices_) {
    Matrix a;
    for (int i : v.facets) a.push_back(normals_[static_cast<std::size_t>(i)]);
    if (determinant(a).abs() != Rational(1)) return false;
  }
  return true;
}

std::vector<MultiPolynomial> Polytope::dilatedVertex(int vi) const {
  const auto& v = vertices_.at(static_cast<std::size_t>(vi));
  const int n = dimension(), d = facetCount();
  std::vector<MultiPolynomial> out;
  for (int k = 0; k < n; ++k) {
    MultiPolynomial c = MultiPolynomial::constant(d, v.location[static_cast<std::size_t>(k)]);
    for (std::size_t s = 0; s < v.facets.size(); ++s) {
      c -= MultiPolynomial::variable(d, v.facets[s]) * v.edges[s][static_cast<std::size_t>(k)];
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<std::pair<LatticePoint, int>> Polytope::latticePoints() const {
  std::vector<std::pair<LatticePoint, int>> out;
  forEachBoxPoint(boxLo_, boxHi_, [&](const LatticePoint& x) {
    const Vector xr = toRational(x);
    int active = 0;
    for (int i = 0; i < facetCount(); ++i) {
      const int s = slack(i, xr).sign();
      if (s < 0) return;
      if (s == 0) ++active;
    }
    out.emplace_back(x, active);
  });
  return out;
}

Polarization Polytope::polarize(std::optional<Vector> xi) const {
  const int n = dimension();
  auto attempt = [&](const Vector& candidate, bool strict) -> std::optional<Polarization> {
    if (static_cast<int>(candidate.size()) != n) throw InputError("polarizing vector has the wrong dimension");
    Polarization pol;
    pol.xi = candidate;
    for (int vi = 0; vi < static_cast<int>(vertices_.size()); ++vi) {
      const auto& v = vertices_[static_cast<std::size_t>(vi)];
      PolarizedVertex pv;
      pv.vertex = vi;
      for (std::size_t s = 0; s < v.edges.size(); ++s) {
        const int sgn = dot(candidate, v.edges[s]).sign();
        if (sgn == 0) {
          if (!strict) return std::nullopt;
          throw InputError("vector " + formatPoint(candidate) + " is not polarizing: it pairs to zero with the edge of facet " +
                           std::to_string(v.facets[s]) + " at vertex " + formatPoint(v.location));
        }
        const int flip = sgn > 0 ? -1 : 1;
        pv.signs.push_back(flip);
        Vector e = v.edges[s];
        if (flip < 0) {
          for (auto& c : e) c = -c;
          ++pv.flips;
        }
        pv.edges.push_back(std::move(e));
      }
      pol.vertices.push_back(std::move(pv));
    }
    return pol;
  };
  if (xi) return *attempt(*xi, true);
  for (int t = 2;; ++t) {
    Vector candidate;
    Rational power(1);
    for (int k = 0; k < n; ++k) {
      candidate.push_back(power);
      power *= Rational(t);
    }
    if (auto pol = attempt(candidate, false)) {
      pol->sweepParameter = t;
      return *pol;
    }
  }
}

Cone Polytope::tangentCone(int vi) const {
  const auto& v = vertices_.at(static_cast<std::size_t>(vi));
  std::vector<Vector> normals;
  for (int i : v.facets) normals.push_back(normals_[static_cast<std::size_t>(i)]);
  return Cone{v.location, std::move(normals), v.edges};
}

Cone Polytope::polarizedCone(const PolarizedVertex& pv) const {
  const auto& v = vertices_.at(static_cast<std::size_t>(pv.vertex));
  std::vector<Vector> normals;
  for (std::size_t s = 0; s < v.facets.size(); ++s) {
    Vector u = normals_[static_cast<std::size_t>(v.facets[s])];
    if (pv.signs[s] < 0) {
      for (auto& c : u) c = -c;
    }
    normals.push_back(std::move(u));
  }
  return Cone{v.location, std::move(normals), pv.edges};
}

Rational weightedLatticeSum(const Polytope& polytope, const MultiPolynomial& p, const Rational& q) {
  if (p.variableCount() != polytope.dimension()) throw InputError("polynomial arity must match the dimension");
  Rational acc(0);
  for (const auto& [x, c] : polytope.latticePoints()) acc += q.pow(c) * p.evaluate(toRational(x));
  return acc;
}

Rational weightedLatticeSum(const Polytope& polytope, const LatticeFunction& f, const Rational& q) {
  Rational acc(0);
  for (const auto& [x, c] : polytope.latticePoints()) {
    bool inside = true;
    for (std::size_t k = 0; k < x.size(); ++k) inside = inside && x[k] >= f.lo[k] && x[k] <= f.hi[k];
    if (inside) acc += q.pow(c) * f.f(x);
  }
  return acc;
}

double weightedLatticeSum(const Polytope& polytope, const SmoothFunction& f, const Rational& q) {
  double acc = 0.0;
  for (const auto& [x, c] : polytope.latticePoints()) {
    const auto xd = toDouble(x);
    acc += q.pow(c).toDouble() * f(xd);
  }
  return acc;
}

Rational coneWeightedSum(const Cone& cone, const std::vector<Rational>& q, const LatticeFunction& f) {
  Rational acc(0);
  forEachConePoint(cone, q, f.lo, f.hi, [&](const LatticePoint& x, const Rational& w) { acc += w * f.f(x); });
  return acc;
}

double coneWeightedSum(const Cone& cone, const std::vector<Rational>& q, const SmoothFunction& f) {
  LatticePoint lo, hi;
  smoothBox(f, lo, hi);
  double acc = 0.0;
  forEachConePoint(cone, q, lo, hi, [&](const LatticePoint& x, const Rational& w) {
    const auto xd = toDouble(x);
    acc += w.toDouble() * f(xd);
  });
  return acc;
}

HalfSpaceDescription parseHalfSpaces(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    HalfSpaceDescription d;
    d.dimension = j.at("dimension").get<int>();
    for (const auto& h : j.at("halfspaces")) {
      d.halfspaces.push_back(HalfSpace{h.at("normal").get<std::vector<long>>(), h.at("offset").get<long>()});
    }
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed polytope JSON: ") + e.what());
  }
}

}  // namespace wem
