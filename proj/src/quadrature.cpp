#include "wem/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

namespace wem {

QuadratureResult integratePieces(const ComplexIntegrand& f, const std::vector<double>& breakpoints,
                                 double relativeTolerance, unsigned maxDepth) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  QuadratureResult out;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const double a = breakpoints[i], b = breakpoints[i + 1];
    if (!(b > a)) continue;
    double err = 0.0;
    out.value += GK::integrate(f, a, b, maxDepth, relativeTolerance, &err);
    out.error += err;
  }
  return out;
}

namespace {

// 15-point Kronrod nodes on [0, 1] (the odd ones are the 7-point Gauss nodes) and weights.
constexpr double kNodes[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                              0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                              0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                              0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kKronrod[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kGauss[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                              0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Piece {
  double a, b;
  std::complex<double> value;
  double error;
  int depth;
};

Piece kronrod15(const ComplexIntegrand& f, double a, double b, int depth) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  const std::complex<double> center = f(mid);
  std::complex<double> k = kKronrod[7] * center, g = kGauss[3] * center;
  for (int i = 0; i < 7; ++i) {
    const std::complex<double> s = f(mid - half * kNodes[i]) + f(mid + half * kNodes[i]);
    k += kKronrod[i] * s;
    if (i % 2 == 1) g += kGauss[i / 2] * s;
  }
  return Piece{a, b, half * k, std::abs(half * (k - g)), depth};
}

}  // namespace

QuadratureResult integrateAdaptive(const ComplexIntegrand& f, const std::vector<double>& breakpoints,
                                   double absoluteTolerance, double relativeTolerance, int maxDepth) {
  auto smaller = [](const Piece& x, const Piece& y) { return x.error < y.error; };
  std::vector<Piece> heap;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (breakpoints[i + 1] > breakpoints[i]) heap.push_back(kronrod15(f, breakpoints[i], breakpoints[i + 1], 0));
  }
  std::make_heap(heap.begin(), heap.end(), smaller);
  std::complex<double> total = 0.0;
  double error = 0.0;
  for (const auto& p : heap) {
    total += p.value;
    error += p.error;
  }
  while (!heap.empty() && error > std::max(absoluteTolerance, relativeTolerance * std::abs(total))) {
    std::pop_heap(heap.begin(), heap.end(), smaller);
    const Piece p = heap.back();
    if (p.depth >= maxDepth) {
      std::push_heap(heap.begin(), heap.end(), smaller);
      break;  // the worst piece cannot be refined further
    }
    heap.pop_back();
    const double mid = 0.5 * (p.a + p.b);
    const Piece l = kronrod15(f, p.a, mid, p.depth + 1), r = kronrod15(f, mid, p.b, p.depth + 1);
    total += l.value + r.value - p.value;
    error += l.error + r.error - p.error;
    for (const Piece& c : {l, r}) {
      heap.push_back(c);
      std::push_heap(heap.begin(), heap.end(), smaller);
    }
  }
  // re-sum to shed the rounding of the running totals
  QuadratureResult out;
  for (const auto& p : heap) {
    out.value += p.value;
    out.error += p.error;
  }
  return out;
}

std::vector<double> integerBreakpoints(double a, double b) {
  std::vector<double> out{a};
  for (double x = std::floor(a) + 1; x < b; x += 1.0) {
    if (x > a) out.push_back(x);
  }
  out.push_back(b);
  return out;
}

QuadratureResult integrateIntegerPieces(const ComplexIntegrand& f, double a, double b, double relativeTolerance) {
  if (!(b > a)) return {};
  return integratePieces(f, integerBreakpoints(a, b), relativeTolerance);
}

}  // namespace wem
