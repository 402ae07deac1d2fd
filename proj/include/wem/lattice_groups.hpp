#pragma once

// Finite abelian groups Gamma_F = (N_F cap Z^n*) / V_F attached to the faces of a simple
// polytope, with their characters lambda_{gamma,j,F} = e^{2 pi i <gamma, alpha_{j,v}>}.

#include <vector>

#include "wem/cyclotomic.hpp"
#include "wem/linalg.hpp"
#include "wem/polytope.hpp"

namespace wem {

using IntMatrix = std::vector<std::vector<long>>;

/// Smith normal form D = L A R of an integer matrix, with only the column transform kept.
struct SmithForm {
  std::vector<long> diagonal;  // d_1 | d_2 | ..., length min(rows, cols), non-negative
  IntMatrix columnTransform;   // R, unimodular
  IntMatrix columnInverse;     // Q = R^{-1}
};
SmithForm smithNormalForm(const IntMatrix& a);

struct GroupElement {
  std::vector<long> coordinates;  // with respect to the invariant-factor generators
  Vector lift;                    // an integral covector in N_F representing the class
};

struct FaceGroup {
  int face = 0;  // index into Polytope::faces()
  std::vector<long> invariantFactors;
  std::vector<GroupElement> elements;  // identity first, then lexicographic coordinates
  long order() const { return static_cast<long>(elements.size()); }

  /// Canonical coordinates of an integral covector lying in N_F.
  std::vector<long> coordinatesOf(const Vector& covector) const;

  // internal: rank r of N_F, indices of nontrivial factors, and the SNF column transform
  int rank = 0;
  std::vector<int> factorRows;
  std::vector<long> diagonal;
  IntMatrix columnTransform;
};

/// Groups, characters and flat subsets for every face of a validated polytope. The
/// constructor asserts the character properties (well-definedness across the vertices of a
/// face, triviality off the face, and non-triviality of flat elements) and throws
/// ConsistencyError if any fails.
class GroupData {
 public:
  explicit GroupData(const Polytope& polytope);

  const Polytope& polytope() const { return *polytope_; }
  const FaceGroup& group(int face) const { return groups_.at(static_cast<std::size_t>(face)); }
  /// rotation(face, element, j) in [0, 1): lambda_{gamma,j,F} = e^{2 pi i rotation}; 0 off I_F.
  const Rational& rotation(int face, int element, int facet) const;
  RootOfUnity character(int face, int element, int facet) const { return RootOfUnity(rotation(face, element, facet)); }
  /// Indices (into group(face).elements) of Gamma_F^flat.
  const std::vector<int>& flat(int face) const { return flat_.at(static_cast<std::size_t>(face)); }
  /// lcm of all character orders.
  int ambientOrder() const { return ambientOrder_; }

  /// Vertex group index of a vertex (the face whose facet set is I_v).
  int vertexFace(int vertex) const { return vertexFaces_.at(static_cast<std::size_t>(vertex)); }

  /// (1/|Gamma_v|) sum_gamma e^{2 pi i <gamma, x - v>} for x in v + sum Z alpha_{j,v}.
  Rational frobeniusIndicator(int vertex, const Point& x) const;

 private:
  const Polytope* polytope_;
  std::vector<FaceGroup> groups_;
  std::vector<std::vector<std::vector<Rational>>> rotations_;  // [face][element][facet]
  std::vector<std::vector<int>> flat_;
  std::vector<int> vertexFaces_;
  int ambientOrder_ = 1;
};

}  // namespace wem
