#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "wem/em1d.hpp"
#include "wem/em_nd.hpp"
#include "wem/errors.hpp"

using namespace wem;

namespace {

const std::vector<Rational> kWeights{Rational(0), Rational(1, 3), Rational(1, 2), Rational(1), Rational(2)};

MultiPolynomial one(int n) { return MultiPolynomial::constant(n, Rational(1)); }

}  // namespace

TEST_CASE("volume polynomial of the square is the product of dilated sides") {
  const auto square = Polytope::validate(fixture::unitSquare());
  const auto v = volumePolynomial(square, one(2));
  const auto h = [](int i) { return MultiPolynomial::variable(4, i); };
  const auto expected = (one(4) + h(0) + h(2)) * (one(4) + h(1) + h(3));
  CHECK(v.polynomial == expected);
}

TEST_CASE("volume polynomial at h = 0 is the area") {
  const auto t = Polytope::validate(fixture::triangleT());
  const auto v = volumePolynomial(t, one(2));
  const std::vector<Rational> zero(3, Rational(0));
  CHECK(v.polynomial.evaluate(std::span<const Rational>(zero)) == Rational(1));
  CHECK(v.polynomial.totalDegree() <= 2);

  const auto x = MultiPolynomial::variable(2, 0);
  const auto vx = volumePolynomial(t, x);
  CHECK(vx.polynomial.evaluate(std::span<const Rational>(zero)) == Rational(1, 3));
}

TEST_CASE("volume polynomial of an interval") {
  HalfSpaceDescription d{1, {HalfSpace{{1}, -2}, HalfSpace{{-1}, 5}}};  // [2, 5]
  const auto seg = Polytope::validate(d);
  const auto v = volumePolynomial(seg, MultiPolynomial::variable(1, 0));
  const auto h1 = MultiPolynomial::variable(2, 0), h2 = MultiPolynomial::variable(2, 1);
  const auto c = [](int a) { return MultiPolynomial::constant(2, Rational(a)); };
  const auto expected = ((c(5) + h2).pow(2) - (c(2) - h1).pow(2)) * Rational(1, 2);
  CHECK(v.polynomial == expected);
}

TEST_CASE("simplex volumes of the suite") {
  const std::vector<Rational> volumes{Rational(1), Rational(6), Rational(1), Rational(4),
                                      Rational(1), Rational(1, 6), Rational(2, 3)};
  std::size_t i = 0;
  for (const auto& [name, d] : fixture::suite()) {
    CAPTURE(name);
    const auto p = Polytope::validate(d);
    const auto v = volumePolynomial(p, one(d.dimension));
    const std::vector<Rational> zero(static_cast<std::size_t>(p.facetCount()), Rational(0));
    CHECK(v.polynomial.evaluate(std::span<const Rational>(zero)) == volumes[i++]);
  }
}

TEST_CASE("main term examples") {
  const auto square = Polytope::validate(fixture::unitSquare());
  const GroupData sg(square);
  for (const auto& q : kWeights) {
    for (int k = 2; k <= 5; ++k) CHECK(mainTermPolynomial(square, sg, one(2), q, k).value == Rational(4) * q * q);
  }
  const auto t = Polytope::validate(fixture::triangleT());
  const GroupData tg(t);
  for (const auto& q : kWeights) {
    for (int k = 4; k <= 6; ++k) CHECK(mainTermPolynomial(t, tg, one(2), q, k).value == Rational(3) * q * q + q);
  }
  const auto t2 = Polytope::validate(fixture::triangle2T());
  const GroupData t2g(t2);
  for (const auto& q : kWeights) {
    CHECK(exactPolynomialSum(t2, t2g, one(2), q) == Rational(3) * q * q + Rational(5) * q + Rational(1));
  }
  const auto xy = MultiPolynomial::monomial(2, {1, 1}, Rational(1));
  CHECK(exactPolynomialSum(square, sg, xy, Rational(1)) == Rational(1));
  CHECK(exactPolynomialSum(t, tg, MultiPolynomial::variable(2, 1), Rational(0)) == Rational(0));
}

TEST_CASE("interval main term for f(x) = x") {
  for (long b = 1; b <= 5; ++b) {
    HalfSpaceDescription d{1, {HalfSpace{{1}, 0}, HalfSpace{{-1}, b}}};
    const auto seg = Polytope::validate(d);
    const GroupData g(seg);
    for (const auto& q : kWeights) {
      const Rational expected = Rational(b * (b - 1), 2) + q * Rational(b);
      CHECK(mainTermPolynomial(seg, g, MultiPolynomial::variable(1, 0), q, 2).value == expected);
    }
  }
}

TEST_CASE("exact polynomial sums equal enumeration on the suite") {
  for (const auto& [name, d] : fixture::suite()) {
    CAPTURE(name);
    const auto p = Polytope::validate(d);
    const GroupData g(p);
    for (const auto& q : kWeights) {
      for (const auto& m : oracle::monomialsUpTo(d.dimension, 3)) {
        CHECK(exactPolynomialSum(p, g, m, q) == oracle::bruteWeightedSum(d, m, q));
      }
    }
  }
}

TEST_CASE("regular polytopes collapse to the product of chi operators") {
  for (const auto& d : {fixture::unitSquare(), fixture::rectangle32(), fixture::cube()}) {
    const auto p = Polytope::validate(d);
    REQUIRE(p.isRegular());
    const GroupData g(p);
    for (const auto& q : kWeights) {
      for (const auto& m : oracle::monomialsUpTo(d.dimension, 2)) CHECK(exactPolynomialSum(p, g, m, q) == regularMainTerm(p, m, q));
    }
  }
  const auto square = Polytope::validate(fixture::unitSquare());
  for (const auto& q : {Rational(1, 5), Rational(2, 7), Rational(3, 4), Rational(5, 3), Rational(-1, 2)}) {
    CHECK(regularMainTerm(square, one(2), q) == Rational(4) * q * q);
  }
  const auto t = Polytope::validate(fixture::triangleT());
  CHECK_THROWS_AS(regularMainTerm(t, one(2), Rational(1)), InputError);
}

TEST_CASE("contributions are sorted and the vertex group of T contributes") {
  const auto t = Polytope::validate(fixture::triangleT());
  const GroupData g(t);
  const auto r = mainTermPolynomial(t, g, one(2), Rational(1, 3), 4);
  REQUIRE(r.contributions.size() == 2);
  CHECK(r.contributions[0].facets.empty());
  CHECK(r.contributions[1].facets == IndexSet{1, 2});
  CHECK(r.contributions[1].element == std::vector<long>{1});
  CHECK(!r.contributions[1].exact.isZero());
  Cyclotomic sum;
  for (const auto& c : r.contributions) sum += c.exact;
  CHECK(isRational(sum) == r.value);
}

TEST_CASE("face operators vanish at zero on the facets of their face") {
  const auto p = Polytope::validate(fixture::wedge3());
  const GroupData g(p);
  for (int f = 0; f < static_cast<int>(p.faces().size()); ++f) {
    for (int e : g.flat(f)) {
      const auto ops = faceOperators(g, f, e, Rational(1, 3), 5);
      for (int j : p.faces()[static_cast<std::size_t>(f)].facets) {
        CHECK(ops[static_cast<std::size_t>(j)].coefficients.coefficient(0).isZero());
      }
    }
  }
}

TEST_CASE("exact results do not depend on the thread count") {
  const auto p = Polytope::validate(fixture::wedge3());
  const GroupData g(p);
  const auto m = MultiPolynomial::monomial(3, {1, 2, 0}, Rational(1));
  setenv("WEM_THREADS", "1", 1);
  const auto serial = mainTermPolynomial(p, g, m, Rational(2, 5), 6);
  setenv("WEM_THREADS", "4", 1);
  const auto parallel = mainTermPolynomial(p, g, m, Rational(2, 5), 6);
  unsetenv("WEM_THREADS");
  CHECK(serial.total == parallel.total);
  REQUIRE(serial.contributions.size() == parallel.contributions.size());
  for (std::size_t i = 0; i < serial.contributions.size(); ++i) {
    CHECK(serial.contributions[i].exact == parallel.contributions[i].exact);
  }
}

TEST_CASE("square with a separable bump factors into interval formulas") {
  const auto square = Polytope::validate(fixture::unitSquare());
  const GroupData g(square);
  const SmoothFunction f({0.4, 0.7}, {1.3, 1.6});
  const auto fx = bump1D(0.4, 1.3), fy = bump1D(0.7, 1.6);
  for (int k = 2; k <= 5; ++k) {
    for (const auto& q : {Rational(0), Rational(1, 3), Rational(1, 2), Rational(1)}) {
      const auto r = smoothEM(square, g, f, q, k, square.polarize());
      const auto a = emInterval(fx, 0, 1, q, k), b = emInterval(fy, 0, 1, q, k);
      CHECK(std::abs(r.mainTerm - a.mainTerm * b.mainTerm) < 1e-12);
      CHECK(std::abs(r.weightedSum - a.weightedSum * b.weightedSum) < 1e-12);
      CHECK(std::abs(r.vertexRouteMainTerm - r.mainTerm) < 1e-12);
      CHECK(std::abs(r.remainderByCones - r.remainderByDifference) < 1e-12);
    }
  }
}

TEST_CASE("half weights reproduce the L operator formula") {
  for (int k = 1; k <= 8; ++k) {
    const auto chi = chiSeries(Rational(1, 2), k), l = lSeries(k);
    for (int j = 0; j <= k; ++j) CHECK(chi[j] == l[j]);
  }
  // prod L(d/dh_j) int_{-h_1}^{1+h_3} f_x * int_{-h_2}^{1+h_4} f_y on the square, with L written out
  const auto square = Polytope::validate(fixture::unitSquare());
  const GroupData g(square);
  const SmoothFunction f({0.3, 0.6}, {1.7, 1.4});
  const auto fx = bump1D(0.3, 1.7), fy = bump1D(0.6, 1.4);
  const int k = 4;
  const auto l = lSeries(k);
  auto side = [&](const Smooth1D& h) {
    double acc = oracle::simpson([&](double x) { return h.derivative(0, x); }, 0.0, 1.0, 4000);
    for (int j = 1; j <= k; ++j) {
      // d^j/dh^j of int_{-h}^{1} at 0 and of int_0^{1+h} at 0, each weighted by L_j and the other side's L_0
      acc += l[j].toDouble() * (((j - 1) % 2 == 0 ? 1.0 : -1.0) * h.derivative(j - 1, 0.0) + h.derivative(j - 1, 1.0));
    }
    return acc;
  };
  const auto r = smoothEM(square, g, f, Rational(1, 2), k, square.polarize());
  CHECK(std::abs(r.mainTerm - side(fx) * side(fy)) < 1e-8);
}

TEST_CASE("smooth main term on T is independent of the polarization") {
  const auto t = Polytope::validate(fixture::triangleT());
  const GroupData g(t);
  const SmoothFunction f({0.4, 0.7}, {2.3, 2.6}, MultiPolynomial::monomial(2, {1, 0}, Rational(1)) + one(2));
  const std::vector<Vector> xis{{Rational(1), Rational(2)}, {Rational(-1), Rational(3)}, {Rational(3), Rational(-1)},
                                {Rational(-2), Rational(-5)}};
  for (int k = 2; k <= 4; ++k) {
    const auto base = smoothEM(t, g, f, Rational(1, 3), k, t.polarize(xis[0]));
    for (std::size_t i = 1; i < xis.size(); ++i) {
      const auto other = smoothEM(t, g, f, Rational(1, 3), k, t.polarize(xis[i]));
      CHECK(std::abs(other.mainTerm - base.mainTerm) < 1e-9);
      CHECK(std::abs(other.remainderByDifference - base.remainderByDifference) < 1e-9);
      CHECK(std::abs(other.remainderByCones - base.remainderByCones) < 1e-9);
    }
    CHECK(std::abs(base.vertexRouteMainTerm - base.mainTerm) < 1e-10);
    CHECK(std::abs(base.restrictedMainTerm - base.mainTerm) < 1e-12);
    CHECK(std::abs(base.remainderByCones - base.remainderByDifference) < 1e-10);
  }
}

TEST_CASE("remainder shrinks as the bump widens on T") {
  const auto t = Polytope::validate(fixture::triangleT());
  const GroupData g(t);
  const auto pol = t.polarize();
  for (int k : {2, 4, 6}) {
    const auto narrow = smoothEM(t, g, SmoothFunction({0.4, 0.7}, {3.0, 3.0}), Rational(1, 3), k, pol);
    const auto wide = smoothEM(t, g, SmoothFunction({0.4, 0.7}, {8.0, 8.0}), Rational(1, 3), k, pol);
    CHECK(std::abs(wide.remainderByDifference) < std::abs(narrow.remainderByDifference));
  }
  const SmoothFunction wide({0.4, 0.7}, {8.0, 8.0});
  CHECK(std::abs(smoothEM(t, g, wide, Rational(1, 3), 6, pol).remainderByDifference) <
        std::abs(smoothEM(t, g, wide, Rational(1, 3), 2, pol).remainderByDifference) * 1e-3);
}

TEST_CASE("a function supported away from the polytope") {
  const auto t = Polytope::validate(fixture::triangleT());
  const GroupData g(t);
  const SmoothFunction f({4.5, 4.5}, {1.2, 1.2});
  const auto r = smoothEM(t, g, f, Rational(1, 3), 3, t.polarize());
  CHECK(r.weightedSum == 0.0);
  CHECK(std::abs(r.mainTerm + r.remainderByDifference) < 1e-14);
  CHECK(std::abs(r.mainTerm) < 1e-12);
  CHECK(std::abs(r.remainderByCones) < 1e-12);
}

TEST_CASE("orthant with a separable bump") {
  const Cone orthant = Cone::fromNormals({Rational(0), Rational(0)}, {{Rational(1), Rational(0)}, {Rational(0), Rational(1)}});
  const SmoothFunction f({0.4, 0.7}, {1.3, 1.6});
  const auto fx = bump1D(0.4, 1.3), fy = bump1D(0.7, 1.6);
  for (int k = 2; k <= 4; ++k) {
    for (const auto& q : {Rational(0), Rational(1, 3), Rational(1)}) {
      const auto r = coneEM(orthant, {q, q}, f, k);
      const auto a = emRay(fx, 0, q, k), b = emRay(fy, 0, q, k);
      CHECK(r.groupOrder == 1);
      CHECK(std::abs(r.mainTerm - a.mainTerm * b.mainTerm) < 1e-12);
      CHECK(std::abs(r.weightedSum - (a.weightedSum * b.weightedSum).real()) < 1e-12);
      CHECK(std::abs(r.remainderByDifference - r.remainderByIntegral) < 1e-8);
    }
  }
}

TEST_CASE("T's cone at (1, 0) averages twisted sums") {
  const auto t = Polytope::validate(fixture::triangleT());
  const int v = 2;
  REQUIRE(t.vertices()[v].location == Vector{Rational(1), Rational(0)});
  const Cone cone = t.tangentCone(v);
  const auto chars = coneCharacters(cone);
  REQUIRE(chars.size() == 2);
  CHECK(chars[1] == std::vector<Rational>{Rational(1, 2), Rational(1, 2)});

  // lattice-sampled f near the vertex, summed over t = m in Z^2_{>=0} with the Frobenius average
  const LatticeFunction f{[](std::span<const long> x) { return Rational(3 * x[0] - x[1] + 7, 1 + x[1] * x[1]); }, {-3, -1}, {3, 5}};
  const std::vector<Rational> q{Rational(1, 3), Rational(2, 5)};
  Cyclotomic averaged(Rational(0), 2);
  for (long m0 = 0; m0 <= 40; ++m0) {
    for (long m1 = 0; m1 <= 40; ++m1) {
      Vector x = cone.apex;
      for (std::size_t k = 0; k < 2; ++k) x[k] += Rational(m0) * cone.edges[0][k] + Rational(m1) * cone.edges[1][k];
      Cyclotomic indicator(Rational(0), 2);
      for (const auto& rot : chars) indicator += rootOfUnity((rot[0] * Rational(m0) + rot[1] * Rational(m1)).fractionalPart(), 2);
      indicator *= Cyclotomic(Rational(1, 2));
      if (indicator.isZero()) continue;
      REQUIRE(x[0].isInteger());
      REQUIRE(x[1].isInteger());
      const std::vector<long> xl{x[0].numerator().get_si(), x[1].numerator().get_si()};
      if (xl[0] < f.lo[0] || xl[0] > f.hi[0] || xl[1] < f.lo[1] || xl[1] > f.hi[1]) continue;
      Rational w(1);
      if (m0 == 0) w *= q[0];
      if (m1 == 0) w *= q[1];
      averaged += indicator * Cyclotomic(w * f.f(xl));
    }
  }
  CHECK(isRational(averaged) == coneWeightedSum(cone, q, f));

  const SmoothFunction g({1.2, 0.3}, {1.5, 1.4});
  for (int k = 2; k <= 3; ++k) {
    const auto r = coneEM(cone, q, g, k);
    CHECK(r.groupOrder == 2);
    CHECK(std::abs(r.remainderByDifference - r.remainderByIntegral) < 1e-8);
  }
}

TEST_CASE("higher order shrinks the cone remainder for a slowly varying function") {
  // the bump's Fourier transform decays like exp(-c sqrt(w)), which leaves a k-independent floor;
  // only the boundary part of the remainder improves with k
  const Cone orthant = Cone::fromNormals({Rational(0), Rational(0)}, {{Rational(1), Rational(0)}, {Rational(0), Rational(1)}});
  MultiPolynomial p = MultiPolynomial::monomial(2, {3, 0}, Rational(1)) + MultiPolynomial::monomial(2, {1, 2}, Rational(-2)) + one(2);
  const SmoothFunction f({0.0, 0.0}, {9.0, 9.0}, p);
  for (const auto& q : {Rational(0), Rational(1, 3), Rational(1, 2), Rational(1)}) {
    const auto low = coneEM(orthant, {q, q}, f, 2, false);
    const auto high = coneEM(orthant, {q, q}, f, 6, false);
    CHECK(std::abs(high.remainderByDifference) < std::abs(low.remainderByDifference));
    CHECK(std::isnan(high.remainderByIntegral.real()));
  }
}

TEST_CASE("estimate report") {
  const auto t = Polytope::validate(fixture::triangleT());
  const GroupData g(t);
  const auto pol = t.polarize();
  std::vector<std::pair<std::string, SmoothFunction>> family;
  for (double e : {2.0, 3.0, 4.0}) family.emplace_back("eps", SmoothFunction({1.0 / 3, 2.0 / 3}, {e, e}));
  for (int k = 2; k <= 4; ++k) {
    const auto report = remainderEstimateReport(t, g, family, Rational(1, 3), k, pol);
    REQUIRE(report.rows.size() == 3);
    for (const auto& row : report.rows) {
      CHECK(std::isfinite(row.ratio));
      CHECK(row.ratio > 0.0);
      CHECK(row.derivativeNorm > 0.0);
    }
    CHECK(report.maxRatio >= report.minRatio);
  }
  const auto zero = remainderEstimateReport(t, g, {{"zero", SmoothFunction::zero(2)}}, Rational(1, 3), 3, pol);
  CHECK(zero.rows[0].remainder == 0.0);
  CHECK(zero.rows[0].ratio == 0.0);
}

TEST_CASE("mixed partial L1 norms") {
  // ||phi'||_1 = 2 phi(0) for the even unimodal bump
  const SmoothFunction f({0.0}, {1.0});
  CHECK(partialL1Norm(f, {1}) == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-9));
  const SmoothFunction g({0.5, -0.2}, {2.0, 1.5});
  CHECK(partialL1Norm(g, {1, 0}) == doctest::Approx(2.0 * std::exp(-1.0) * oracle::simpson([](double s) {
                                                       return s * s < 1.0 ? std::exp(-1.0 / (1.0 - s * s)) : 0.0;
                                                     }, -1.0, 1.0, 20000) * 1.5).epsilon(1e-6));
  // the quadrature route for a non-constant multiplier agrees with the separable route when the multiplier is 2
  const SmoothFunction h({0.5, -0.2}, {2.0, 1.5}, MultiPolynomial::constant(2, Rational(2)) + MultiPolynomial::monomial(2, {1, 0}, Rational(0)));
  CHECK(partialL1Norm(h, {2, 1}) == doctest::Approx(2.0 * partialL1Norm(g, {2, 1})).epsilon(1e-6));
}
