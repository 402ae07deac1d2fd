#include "wem/lattice_groups.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

#include "wem/errors.hpp"

namespace wem {

namespace {

IntMatrix identity(std::size_t n) {
  IntMatrix m(n, std::vector<long>(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

void swapColumns(IntMatrix& m, std::size_t a, std::size_t b) {
  for (auto& row : m) std::swap(row[a], row[b]);
}

// column b -= f * column a
void subtractColumn(IntMatrix& m, std::size_t a, std::size_t b, long f) {
  for (auto& row : m) row[b] -= f * row[a];
}

long floorDiv(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// a - b lies in the integer span of the facet normals of the face
bool congruentModulo(const Polytope& polytope, const Face& face, const Vector& a, const Vector& b) {
  const std::size_t n = a.size();
  Vector diff(n);
  for (std::size_t k = 0; k < n; ++k) diff[k] = a[k] - b[k];
  // coefficients from the Gram system of the face normals
  Matrix gram;
  Vector rhs;
  for (int i : face.facets) {
    Vector row;
    for (int j : face.facets) row.push_back(dot(polytope.normal(i), polytope.normal(j)));
    gram.push_back(std::move(row));
    rhs.push_back(dot(polytope.normal(i), diff));
  }
  const auto m = solve(gram, rhs);
  if (!m) throw ConsistencyError("facet normals of a face are dependent");
  Vector back(n, Rational(0));
  for (std::size_t s = 0; s < face.facets.size(); ++s) {
    if (!(*m)[s].isInteger()) return false;
    for (std::size_t k = 0; k < n; ++k) back[k] += (*m)[s] * polytope.normal(face.facets[s])[k];
  }
  return back == diff;
}

}  // namespace

SmithForm smithNormalForm(const IntMatrix& input) {
  IntMatrix a = input;
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  IntMatrix r = identity(cols);
  const std::size_t diag = std::min(rows, cols);

  for (std::size_t t = 0; t < diag; ++t) {
    while (true) {
      // smallest non-zero entry of the trailing block goes to (t, t)
      std::size_t pi = rows, pj = cols;
      for (std::size_t i = t; i < rows; ++i) {
        for (std::size_t j = t; j < cols; ++j) {
          if (a[i][j] != 0 && (pi == rows || std::labs(a[i][j]) < std::labs(a[pi][pj]))) {
            pi = i;
            pj = j;
          }
        }
      }
      if (pi == rows) break;  // trailing block is zero
      std::swap(a[t], a[pi]);
      swapColumns(a, t, pj);
      swapColumns(r, t, pj);

      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        const long f = floorDiv(a[i][t], a[t][t]);
        for (std::size_t j = t; j < cols; ++j) a[i][j] -= f * a[t][j];
        if (a[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        const long f = floorDiv(a[t][j], a[t][t]);
        subtractColumn(a, t, j, f);
        subtractColumn(r, t, j, f);
        if (a[t][j] != 0) clean = false;
      }
      if (!clean) continue;
      // divisibility of the rest by the pivot
      bool divides = true;
      for (std::size_t i = t + 1; i < rows && divides; ++i) {
        for (std::size_t j = t + 1; j < cols; ++j) {
          if (a[i][j] % a[t][t] != 0) {
            for (std::size_t k = t; k < cols; ++k) a[t][k] += a[i][k];
            divides = false;
            break;
          }
        }
      }
      if (divides) break;
    }
    if (a[t][t] < 0) {
      for (auto& row : a) row[t] = -row[t];
      for (auto& row : r) row[t] = -row[t];
    }
  }

  SmithForm s;
  for (std::size_t t = 0; t < diag; ++t) s.diagonal.push_back(a[t][t]);
  s.columnTransform = r;
  Matrix rq;
  for (const auto& row : r) {
    Vector v;
    for (long c : row) v.emplace_back(c);
    rq.push_back(std::move(v));
  }
  const auto inv = inverse(rq);
  if (!inv) throw ConsistencyError("Smith column transform is singular");
  for (const auto& row : *inv) {
    std::vector<long> out;
    for (const auto& c : row) {
      if (!c.isInteger()) throw ConsistencyError("Smith column transform is not unimodular");
      out.push_back(c.numerator().get_si());
    }
    s.columnInverse.push_back(std::move(out));
  }
  return s;
}

std::vector<long> FaceGroup::coordinatesOf(const Vector& covector) const {
  const std::size_t n = columnTransform.size();
  Vector y(n, Rational(0));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) y[j] += covector[i] * Rational(columnTransform[i][j]);
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!y[j].isInteger()) throw InputError("covector is not integral");
    if (static_cast<int>(j) >= rank && !y[j].isZero()) throw InputError("covector does not lie in N_F");
  }
  std::vector<long> coords;
  for (std::size_t k = 0; k < factorRows.size(); ++k) {
    const long d = invariantFactors[k];
    long c = y[static_cast<std::size_t>(factorRows[k])].numerator().get_si() % d;
    if (c < 0) c += d;
    coords.push_back(c);
  }
  return coords;
}

GroupData::GroupData(const Polytope& polytope) : polytope_(&polytope) {
  const int n = polytope.dimension();
  const int d = polytope.facetCount();
  const auto& faces = polytope.faces();
  Integer ambient(1);

  for (int fi = 0; fi < static_cast<int>(faces.size()); ++fi) {
    const Face& face = faces[static_cast<std::size_t>(fi)];
    FaceGroup g;
    g.face = fi;
    g.rank = face.codimension();
    if (g.rank == 0) {
      g.columnTransform = identity(static_cast<std::size_t>(n));
      g.elements.push_back(GroupElement{{}, Vector(static_cast<std::size_t>(n), Rational(0))});
    } else {
      IntMatrix uf;
      for (int i : face.facets) uf.push_back(polytope.description().halfspaces[static_cast<std::size_t>(i)].normal);
      const SmithForm snf = smithNormalForm(uf);
      g.columnTransform = snf.columnTransform;
      g.diagonal = snf.diagonal;
      std::vector<Vector> generators;
      for (int t = 0; t < g.rank; ++t) {
        const long dt = snf.diagonal[static_cast<std::size_t>(t)];
        if (dt == 0) throw ConsistencyError("facet normals of a face are dependent");
        if (dt >= 2) {
          g.invariantFactors.push_back(dt);
          g.factorRows.push_back(t);
          Vector q;
          for (long c : snf.columnInverse[static_cast<std::size_t>(t)]) q.emplace_back(c);
          generators.push_back(std::move(q));
        }
      }
      // enumerate coordinates in lexicographic order
      std::vector<long> c(g.invariantFactors.size(), 0);
      while (true) {
        Vector lift(static_cast<std::size_t>(n), Rational(0));
        for (std::size_t k = 0; k < c.size(); ++k) {
          for (int j = 0; j < n; ++j) lift[static_cast<std::size_t>(j)] += Rational(c[k]) * generators[k][static_cast<std::size_t>(j)];
        }
        g.elements.push_back(GroupElement{c, std::move(lift)});
        std::size_t k = c.size();
        while (k-- > 0) {
          if (++c[k] < g.invariantFactors[k]) break;
          c[k] = 0;
        }
        if (k == static_cast<std::size_t>(-1)) break;
      }
    }

    // characters: rotation numbers through every vertex of the face
    std::vector<std::vector<Rational>> rot;
    for (const auto& el : g.elements) {
      std::vector<Rational> r(static_cast<std::size_t>(d), Rational(0));
      bool first = true;
      for (int vi : face.vertices) {
        const Vertex& v = polytope.vertices()[static_cast<std::size_t>(vi)];
        for (std::size_t s = 0; s < v.facets.size(); ++s) {
          const int j = v.facets[s];
          const Rational value = dot(el.lift, v.edges[s]).fractionalPart();
          const bool onFace = std::binary_search(face.facets.begin(), face.facets.end(), j);
          if (!onFace) {
            if (!value.isZero()) throw ConsistencyError("character is not trivial on a facet off the face");
            continue;
          }
          if (first) {
            r[static_cast<std::size_t>(j)] = value;
          } else if (r[static_cast<std::size_t>(j)] != value) {
            throw ConsistencyError("character depends on the vertex of the face");
          }
        }
        first = false;
      }
      for (const auto& x : r) ambient = lcm(ambient, x.denominator());
      rot.push_back(std::move(r));
    }

    // flat elements: classes not coming from any strictly larger face
    std::vector<int> flatSet;
    for (int e = 0; e < static_cast<int>(g.elements.size()); ++e) {
      bool fromLarger = false;
      for (int ei = 0; ei < fi && !fromLarger; ++ei) {
        const Face& larger = faces[static_cast<std::size_t>(ei)];
        if (larger.codimension() >= face.codimension() ||
            !std::includes(face.facets.begin(), face.facets.end(), larger.facets.begin(), larger.facets.end())) {
          continue;
        }
        for (const auto& other : groups_[static_cast<std::size_t>(ei)].elements) {
          if (congruentModulo(polytope, face, other.lift, g.elements[static_cast<std::size_t>(e)].lift)) {
            fromLarger = true;
            break;
          }
        }
      }
      if (fromLarger) continue;
      for (int j : face.facets) {
        if (rot[static_cast<std::size_t>(e)][static_cast<std::size_t>(j)].isZero()) {
          throw ConsistencyError("flat element with a trivial character on its face");
        }
      }
      flatSet.push_back(e);
    }
    groups_.push_back(std::move(g));
    rotations_.push_back(std::move(rot));
    flat_.push_back(std::move(flatSet));
  }

  for (const auto& v : polytope.vertices()) {
    const auto f = polytope.findFace(v.facets);
    if (!f) throw ConsistencyError("vertex face missing from the face lattice");
    vertexFaces_.push_back(*f);
  }
  ambientOrder_ = static_cast<int>(ambient.get_si());
}

const Rational& GroupData::rotation(int face, int element, int facet) const {
  return rotations_.at(static_cast<std::size_t>(face)).at(static_cast<std::size_t>(element)).at(static_cast<std::size_t>(facet));
}

Rational GroupData::frobeniusIndicator(int vertex, const Point& x) const {
  const Vertex& v = polytope_->vertices().at(static_cast<std::size_t>(vertex));
  std::vector<Rational> m;
  for (int i : v.facets) {
    const Rational mi = polytope_->slack(i, x) - polytope_->slack(i, v.location);
    if (!mi.isInteger()) throw InputError("point is not in the edge-vector lattice of the cone");
    m.push_back(mi);
  }
  const int face = vertexFace(vertex);
  const auto& g = group(face);
  Cyclotomic sum(Rational(0), ambientOrder_);
  for (int e = 0; e < static_cast<int>(g.elements.size()); ++e) {
    Rational total(0);
    for (std::size_t s = 0; s < v.facets.size(); ++s) total += rotation(face, e, v.facets[s]) * m[s];
    sum += rootOfUnity(total.fractionalPart(), ambientOrder_);
  }
  const auto r = isRational(sum);
  if (!r) throw ConsistencyError("character average is not rational");
  return *r / Rational(g.order());
}

}  // namespace wem
