#pragma once

// Simple integral polytopes given by half-spaces <u_i, x> + mu_i >= 0.

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "wem/linalg.hpp"
#include "wem/multipoly.hpp"
#include "wem/rational.hpp"
#include "wem/smooth.hpp"

namespace wem {

struct HalfSpace {
  std::vector<long> normal;  // inward, primitive
  long offset = 0;
};

struct HalfSpaceDescription {
  int dimension = 0;
  std::vector<HalfSpace> halfspaces;
};

using Point = Vector;
using IndexSet = std::vector<int>;
using LatticePoint = std::vector<long>;

struct Vertex {
  Point location;
  IndexSet facets;            // sorted, size n
  std::vector<Vector> edges;  // edges[k] is alpha_{facets[k], v}

  /// Position of facet i in `facets`, or -1.
  int slot(int facet) const;
};

struct Face {
  IndexSet facets;  // empty for the polytope itself
  std::vector<int> vertices;
  int codimension() const { return static_cast<int>(facets.size()); }
};

/// A simple cone apex + sum t_i edges_i, t_i >= 0, with inward normals dual to the edges.
struct Cone {
  Point apex;
  std::vector<Vector> normals;
  std::vector<Vector> edges;

  /// Builds the dual edge basis; the normals must be linearly independent.
  static Cone fromNormals(Point apex, std::vector<Vector> normals);
  /// Coordinates t_i = <normal_i, x - apex>.
  Vector coordinates(std::span<const Rational> x) const;
};

struct PolarizedVertex {
  int vertex = 0;
  std::vector<int> signs;     // +1 unflipped, -1 flipped, per slot of Vertex::facets
  std::vector<Vector> edges;  // polarized edge vectors
  int flips = 0;              // #v

  Rational weight(int slot, const Rational& q) const {
    return signs[static_cast<std::size_t>(slot)] > 0 ? q : Rational(1) - q;
  }
  std::vector<Rational> weights(const Rational& q) const;
};

struct Polarization {
  Vector xi;
  std::optional<int> sweepParameter;  // t of the moment-curve vector when chosen by default
  std::vector<PolarizedVertex> vertices;
};

/// A Rational-valued lattice function vanishing outside the box [lo, hi].
struct LatticeFunction {
  std::function<Rational(std::span<const long>)> f;
  LatticePoint lo, hi;
};

class Polytope {
 public:
  /// Throws ValidationError (with a witness in the message) or InputError.
  static Polytope validate(const HalfSpaceDescription& description);

  int dimension() const { return description_.dimension; }
  int facetCount() const { return static_cast<int>(description_.halfspaces.size()); }
  const HalfSpaceDescription& description() const { return description_; }
  const Vector& normal(int i) const { return normals_[static_cast<std::size_t>(i)]; }
  Rational offset(int i) const { return Rational(description_.halfspaces[static_cast<std::size_t>(i)].offset); }
  /// <u_i, x> + mu_i.
  Rational slack(int i, std::span<const Rational> x) const;

  const std::vector<Vertex>& vertices() const { return vertices_; }
  /// Every face, ordered by (codimension, facet set); faces()[0] is the polytope.
  const std::vector<Face>& faces() const { return faces_; }
  std::optional<int> findFace(const IndexSet& facets) const;
  bool isRegular() const;

  /// v(h) = v - sum_{i in I_v} h_i alpha_{i,v}, one polynomial in h_1..h_d per coordinate.
  std::vector<MultiPolynomial> dilatedVertex(int v) const;

  const LatticePoint& boxLo() const { return boxLo_; }
  const LatticePoint& boxHi() const { return boxHi_; }
  /// Lattice points of the polytope with their active facet counts c(x).
  std::vector<std::pair<LatticePoint, int>> latticePoints() const;

  /// Default: xi = (1, t, ..., t^{n-1}) for the first t = 2, 3, ... that polarizes.
  Polarization polarize(std::optional<Vector> xi = std::nullopt) const;
  Cone tangentCone(int v) const;
  Cone polarizedCone(const PolarizedVertex& pv) const;

 private:
  HalfSpaceDescription description_;
  std::vector<Vector> normals_;
  std::vector<Vertex> vertices_;
  std::vector<Face> faces_;
  LatticePoint boxLo_, boxHi_;
};

Rational weightedLatticeSum(const Polytope& polytope, const MultiPolynomial& p, const Rational& q);
Rational weightedLatticeSum(const Polytope& polytope, const LatticeFunction& f, const Rational& q);
double weightedLatticeSum(const Polytope& polytope, const SmoothFunction& f, const Rational& q);

/// Sum over cone lattice points of prod_{active i} q_i f(x).
Rational coneWeightedSum(const Cone& cone, const std::vector<Rational>& q, const LatticeFunction& f);
double coneWeightedSum(const Cone& cone, const std::vector<Rational>& q, const SmoothFunction& f);

/// Reads {"dimension": n, "halfspaces": [{"normal": [...], "offset": mu}, ...]}; throws InputError.
HalfSpaceDescription parseHalfSpaces(const std::string& json);

}  // namespace wem
