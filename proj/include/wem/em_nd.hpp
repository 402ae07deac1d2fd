#pragma once

// Weighted Euler-Maclaurin formulas on simple integral polytopes and orthants.

#include <complex>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "wem/cyclotomic.hpp"
#include "wem/kernels.hpp"
#include "wem/lattice_groups.hpp"
#include "wem/multipoly.hpp"
#include "wem/polytope.hpp"
#include "wem/smooth.hpp"

namespace wem {

/// Worker count from WEM_THREADS (default: hardware concurrency, at least 1).
int threadCount();
/// Runs fn(0..count-1) on up to threadCount() threads; results must go to disjoint slots.
void parallelFor(int count, const std::function<void(int)>& fn);

/// Simplices (vertex index lists of size n+1) of the pulling triangulation that recursively
/// pulls the lowest-indexed vertex of every face.
std::vector<std::vector<int>> pullingTriangulation(const Polytope& polytope);

/// h -> int_{Delta(h)} p(x) dx as a polynomial in h_1..h_d.
struct VolumePolynomial {
  MultiPolynomial polynomial;
  std::vector<std::vector<int>> simplices;
};
VolumePolynomial volumePolynomial(const Polytope& polytope, const MultiPolynomial& p);

/// prod_j ops[j](d/dh_j) applied to a polynomial in h, evaluated at h = 0.
Cyclotomic applyOperators(const MultiPolynomial& volume, const std::vector<OperatorPolynomial>& ops, int ambientOrder);

/// The d operators N_q^{k, lambda_{gamma,j,F}} of one (F, gamma).
std::vector<OperatorPolynomial> faceOperators(const GroupData& groups, int face, int element, const Rational& q, int k);

struct Contribution {
  int face = 0;
  IndexSet facets;
  std::vector<long> element;
  Cyclotomic exact;              // exact path only
  std::complex<double> numeric;  // always set
};

struct MainTermResult {
  Cyclotomic total;
  Rational value;  // total, after the rationality check
  int k = 0;
  std::vector<Contribution> contributions;  // sorted by (face, element)
};

/// Sum over faces F and gamma in Gamma_F^flat of N^k_{q,gamma,F} applied to the volume polynomial.
/// Throws ConsistencyError if the total is not rational.
MainTermResult mainTermPolynomial(const Polytope& polytope, const GroupData& groups, const MultiPolynomial& p,
                                  const Rational& q, int k);

/// mainTermPolynomial with k = deg p + n + 1.
Rational exactPolynomialSum(const Polytope& polytope, const GroupData& groups, const MultiPolynomial& p,
                            const Rational& q);

/// prod_{i=1}^d chi_q(d/dh_i) applied to the volume polynomial; requires a regular polytope.
Rational regularMainTerm(const Polytope& polytope, const MultiPolynomial& p, const Rational& q);

/// Characters of the cone group Z^n* / sum Z u_i: rotations[element][slot] = <gamma, alpha_slot> mod 1.
std::vector<std::vector<Rational>> coneCharacters(const Cone& cone);

/// Derivatives at h = 0 of G(h) = int_{t >= -h} g(t) dt, g(t) = f(apex + sum t_i edges_i),
/// and the related orthant integrals with periodic kernel weights.
class OrthantIntegrals {
 public:
  OrthantIntegrals(const Cone& cone, const SmoothFunction& f);

  /// d^b G / dh^b at 0.
  std::complex<double> derivative(const Exponent& b) const;
  double quadratureError() const { return error_; }

  /// int over {t_i >= 0 : i in free} with t_i = 0 elsewhere of prod_i K_i(t_i) d^c g / dt^c,
  /// kernels[i] == nullptr meaning weight 1.
  std::complex<double> integral(const Exponent& c, const std::vector<bool>& free,
                                const std::vector<const PeriodizedKernel*>& kernels) const;

 private:
  const Cone* cone_;
  const SmoothFunction* f_;
  std::vector<double> apex_;
  std::vector<std::vector<double>> edges_, normals_;
  std::vector<std::vector<Rational>> exactEdges_;
  std::vector<double> tLo_, tHi_;  // range of t_i over the support box, clipped to t_i >= 0
  mutable double error_ = 0.0;
};

struct ConeEMResult {
  double weightedSum = 0.0;
  std::complex<double> mainTerm;
  std::complex<double> remainderByDifference;
  std::complex<double> remainderByIntegral;  // NaN when not requested
  long groupOrder = 1;
  double quadratureError = 0.0;
};

/// Cone formula: (1/|Gamma|) sum_gamma prod_i N_{q_i}^{k,lambda_{gamma,i}}(d/dh_i) of the
/// pulled-back orthant integral, with the remainder also evaluated from its orthant integral form.
ConeEMResult coneEM(const Cone& cone, const std::vector<Rational>& q, const SmoothFunction& f, int k,
                    bool integralRemainder = true);

struct EMNDResult {
  double weightedSum = 0.0;
  std::complex<double> mainTerm;               // face/group route
  std::complex<double> remainderByDifference;  // weightedSum - mainTerm
  std::complex<double> remainderByCones;       // sum_v (-1)^{#v} (cone sum - cone main term)
  std::complex<double> vertexRouteMainTerm;    // sum over vertices and full vertex groups
  std::complex<double> restrictedMainTerm;     // face route keeping only vertices of each face
  std::vector<Contribution> contributions;
  Rational q;
  int k = 0;
  Vector xi;
  double quadratureError = 0.0;
};

EMNDResult smoothEM(const Polytope& polytope, const GroupData& groups, const SmoothFunction& f, const Rational& q,
                    int k, const Polarization& polarization);

struct EstimateRow {
  std::string label;
  double remainder = 0.0;  // |R|
  double derivativeNorm = 0.0;  // sup of L1 norms of mixed partials of total order in [k, nk]
  double ratio = 0.0;
};

struct EstimateReport {
  Rational q;
  int k = 0;
  std::vector<EstimateRow> rows;
  double minRatio = 0.0, maxRatio = 0.0;
};

/// L1 norm of the mixed partial d^beta f by nested quadrature over the support box.
double partialL1Norm(const SmoothFunction& f, const Exponent& beta);

EstimateReport remainderEstimateReport(const Polytope& polytope, const GroupData& groups,
                                       const std::vector<std::pair<std::string, SmoothFunction>>& family,
                                       const Rational& q, int k, const Polarization& polarization);

}  // namespace wem
