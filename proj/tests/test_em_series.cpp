#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>

#include "oracles.hpp"
#include "wem/errors.hpp"
#include "wem/kernels.hpp"

using namespace wem;

namespace {

using RSeries = TruncatedSeries<Rational>;

RSeries series(std::vector<Rational> c) {
  const int bound = static_cast<int>(c.size()) - 1;
  return RSeries(std::move(c), bound);
}

std::vector<RootOfUnity> nontrivialRoots(int maxOrder) {
  std::vector<RootOfUnity> out;
  for (int n = 2; n <= maxOrder; ++n) {
    for (int a = 1; a < n; ++a) {
      if (std::gcd(a, n) == 1) out.emplace_back(Rational(a, n));
    }
  }
  return out;
}

Cyclotomic integrateUnit(const std::vector<Cyclotomic>& p) {
  Cyclotomic acc(0);
  for (std::size_t i = 0; i < p.size(); ++i) acc += p[i] * Cyclotomic(Rational(1, static_cast<long>(i + 1)));
  return acc;
}

}  // namespace

TEST_CASE("Bernoulli numbers match the Todd expansion") {
  CHECK(bernoulliNumber(0) == Rational(1));
  CHECK(bernoulliNumber(1) == Rational(-1, 2));
  CHECK(bernoulliNumber(2) == Rational(1, 6));
  CHECK(bernoulliNumber(3) == Rational(0));
  for (int n = 0; n <= 20; ++n) CHECK(bernoulliNumber(n) == oracle::bernoulliFromTodd(n));
}

TEST_CASE("Todd, L and chi series") {
  CHECK(toddSeries(0) == series({Rational(1)}));
  CHECK(toddSeries(2) == series({Rational(1), Rational(1, 2), Rational(1, 12)}));
  CHECK(toddSeries(4) == series({Rational(1), Rational(1, 2), Rational(1, 12), Rational(0), Rational(-1, 720)}));
  CHECK(lSeries(0) == series({Rational(1)}));
  CHECK(lSeries(2) == series({Rational(1), Rational(0), Rational(1, 12)}));
  CHECK(lSeries(3) == series({Rational(1), Rational(0), Rational(1, 12), Rational(0)}));
  CHECK(chiSeries(Rational(1), 4) == toddSeries(4));
  CHECK(chiSeries(Rational(1, 2), 4) == lSeries(4));
  CHECK(chiSeries(Rational(0), 2) == series({Rational(1), Rational(-1, 2), Rational(1, 12)}));
  CHECK(chiSeries(Rational(0), 6) == toddSeries(6).reflect());
}

TEST_CASE("chi symmetry and its relation to Todd and L") {
  const std::vector<Rational> qs{Rational(0), Rational(1, 3), Rational(1, 2), Rational(2, 5), Rational(1)};
  for (const auto& q : qs) {
    for (int k = 0; k <= 6; ++k) {
      const int b = 2 * k;
      CHECK(chiSeries(q, b) == chiSeries(Rational(1) - q, b).reflect());
      if (b >= 1) {
        const RSeries s = RSeries::variable(b);
        CHECK(chiSeries(q, b) - toddSeries(b) == s * (q - Rational(1)));
        CHECK(chiSeries(q, b) - lSeries(b) == s * (q - Rational(1, 2)));
      }
    }
  }
}

TEST_CASE("twisted operator for lambda = -1") {
  const RootOfUnity minusOne(Rational(1, 2));
  for (const auto& q : {Rational(0), Rational(1, 3), Rational(1)}) {
    const auto op = twistedOperator(q, minusOne, 4);
    CHECK(op.coefficients[0].isZero());
    CHECK(op.coefficients[1] == Cyclotomic(q - Rational(1, 2)));
    CHECK(op.coefficients[2] == Cyclotomic(Rational(1, 4)));
    CHECK(op.coefficients[3] == Cyclotomic(Rational(0)));
    CHECK(op.coefficients[4] == Cyclotomic(Rational(-1, 48)));
    CHECK(op.coefficients == oracle::twistGeneratingSeries(q, minusOne, 4));
  }
  CHECK_THROWS_AS(twistedOperator(Rational(1), RootOfUnity(), 4), InputError);
  CHECK_THROWS_AS(twistedOperator(Rational(1), minusOne, 1), InputError);
}

TEST_CASE("linear coefficient at q = 1/2") {
  for (const auto& lambda : nontrivialRoots(8)) {
    const Cyclotomic l = lambda.value();
    const auto op = twistedOperator(Rational(1, 2), lambda, 3);
    CHECK(op.coefficients[1] == Cyclotomic(Rational(1, 2)) + l / (Cyclotomic(1) - l));
  }
}

TEST_CASE("operator symmetry under q -> 1-q, lambda -> 1/lambda, S -> -S") {
  std::vector<RootOfUnity> roots = nontrivialRoots(8);
  roots.emplace_back();  // lambda = 1 through the chi reduction
  for (const auto& lambda : roots) {
    for (int k = 2; k <= 6; ++k) {
      for (const auto& q : {Rational(1, 3), Rational(0), Rational(2)}) {
        const auto lhs = eulerMaclaurinOperator(Rational(1) - q, lambda.inverse(), k).coefficients;
        const auto rhs = eulerMaclaurinOperator(q, lambda, k).coefficients.reflect();
        CHECK(lhs == rhs);
      }
    }
  }
  // the documented instance lambda = i, k = 5, q = 1/3
  const RootOfUnity i(Rational(1, 4));
  CHECK(eulerMaclaurinOperator(Rational(2, 3), i.inverse(), 5).coefficients ==
        eulerMaclaurinOperator(Rational(1, 3), i, 5).coefficients.reflect());
}

TEST_CASE("lambda = 1 operators reduce to Todd truncations differing by S") {
  for (int k = 2; k <= 7; ++k) {
    const auto one = eulerMaclaurinOperator(Rational(1), RootOfUnity(), k).coefficients;
    const auto zero = eulerMaclaurinOperator(Rational(0), RootOfUnity(), k).coefficients;
    const int kk = 2 * (k / 2);
    CHECK(one == toCyclotomic(toddSeries(kk).truncate(k)));
    CHECK(zero == toCyclotomic(toddSeries(kk).reflect().truncate(k)));
    CHECK(one - zero == toCyclotomic(RSeries::variable(k)));
  }
}

TEST_CASE("periodized Bernoulli kernel") {
  const auto p1 = periodizedBernoulli(1);
  CHECK(p1.valueAt(Rational(1, 4)) == Cyclotomic(Rational(-1, 4)));
  CHECK(p1.valueAt(Rational(9, 4)) == Cyclotomic(Rational(-1, 4)));
  CHECK(p1.valueAt(Rational(0)) == Cyclotomic(Rational(0)));
  const auto p2 = periodizedBernoulli(2);
  CHECK(p2.valueAt(Rational(0)) == Cyclotomic(Rational(1, 12)));
  CHECK(p2.valueAt(Rational(1, 2)) == Cyclotomic(Rational(-1, 24)));
  CHECK(std::abs(fourierPeriodizedBernoulli(2, 0.5, 10000) - (-1.0 / 24.0)) < 1e-6);
  for (int m = 1; m <= 6; ++m) {
    const auto p = periodizedBernoulli(m);
    for (double x : {0.1, 0.37, 0.8}) {
      CHECK(std::abs(fourierPeriodizedBernoulli(m, x, 20000) - p(x).real()) < (m == 1 ? 1e-4 : 1e-7));
    }
  }
}

TEST_CASE("twisted kernel for lambda = -1") {
  const RootOfUnity minusOne(Rational(1, 2));
  const auto q1 = twistedKernel(1, minusOne);
  CHECK(q1.period() == 2);
  CHECK(q1.valueAt(Rational(1, 2)) == Cyclotomic(Rational(-1, 2)));
  CHECK(q1.valueAt(Rational(3, 2)) == Cyclotomic(Rational(1, 2)));
  CHECK((integrateUnit(q1.pieces()[0]) + integrateUnit(q1.pieces()[1])).isZero());
  CHECK(twistedKernel(2, minusOne).valueAt(Rational(0)) == Cyclotomic(Rational(1, 4)));
  CHECK(kernelAtZero(2, minusOne) == Cyclotomic(Rational(1, 4)));
  CHECK(kernelAtZero(3, minusOne) == Cyclotomic(Rational(0)));
  CHECK(kernelAtZero(4, minusOne) == Cyclotomic(Rational(-1, 48)));
  CHECK_THROWS_AS(kernelAtZero(1, minusOne), InputError);
  CHECK_THROWS_AS(twistedKernel(2, RootOfUnity()), InputError);
}

TEST_CASE("twisted kernel structure: derivative, jumps, continuity, mean zero") {
  for (const auto& lambda : nontrivialRoots(6)) {
    const int n = lambda.order();
    for (int m = 1; m <= 5; ++m) {
      const auto q = twistedKernel(m, lambda);
      REQUIRE(q.period() == n);
      Cyclotomic mean(0);
      for (const auto& piece : q.pieces()) mean += integrateUnit(piece);
      CHECK(mean.isZero());
      for (int j = 0; j <= n; ++j) {
        const Rational x(j);
        if (m == 1) {
          CHECK(q.rightLimit(x) - q.leftLimit(x) == -lambda.pow(j).value());
        } else {
          CHECK(q.rightLimit(x) == q.leftLimit(x));
        }
      }
      if (m >= 2) {
        const auto lower = twistedKernel(m - 1, lambda);
        for (int j = 0; j < n; ++j) {
          const auto& p = q.pieces()[static_cast<std::size_t>(j)];
          const auto& d = lower.pieces()[static_cast<std::size_t>(j)];
          for (std::size_t i = 1; i < p.size(); ++i) {
            CHECK(p[i] * Cyclotomic(static_cast<int>(i)) == d[i - 1]);
          }
        }
      }
      // periodicity of the evaluator
      CHECK(q.valueAt(Rational(1, 3)) == q.valueAt(Rational(1, 3) + Rational(n)));
    }
  }
}

TEST_CASE("kernel values at zero agree with the generating function") {
  for (const auto& lambda : nontrivialRoots(6)) {
    const auto gen = oracle::twistGeneratingSeries(Rational(1, 3), lambda, 6);
    for (int m = 2; m <= 6; ++m) CHECK(kernelAtZero(m, lambda) == gen[m]);
    CHECK(twistedOperator(Rational(1, 3), lambda, 6).coefficients == gen);
  }
}
