#pragma once

// Dense univariate polynomials over Q, lowest degree first. Internal helper.

#include <utility>
#include <vector>

#include "wem/rational.hpp"

namespace wem::detail {

using RatPoly = std::vector<Rational>;

inline void trim(RatPoly& p) {
  while (!p.empty() && p.back().isZero()) p.pop_back();
}

inline RatPoly mul(const RatPoly& a, const RatPoly& b) {
  if (a.empty() || b.empty()) return {};
  RatPoly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].isZero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  trim(r);
  return r;
}

inline RatPoly sub(RatPoly a, const RatPoly& b) {
  if (a.size() < b.size()) a.resize(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  trim(a);
  return a;
}

/// Quotient and remainder of a by a nonzero b.
inline std::pair<RatPoly, RatPoly> divmod(RatPoly a, const RatPoly& b) {
  trim(a);
  if (a.size() < b.size()) return {{}, a};
  RatPoly q(a.size() - b.size() + 1);
  const Rational lead = b.back();
  for (std::size_t i = a.size(); i-- >= b.size();) {
    const Rational c = a[i] / lead;
    q[i - (b.size() - 1)] = c;
    if (c.isZero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j) a[i - (b.size() - 1) + j] -= c * b[j];
  }
  trim(a);
  trim(q);
  return {q, a};
}

/// Remainder of a modulo a monic polynomial m.
inline RatPoly reduceMonic(RatPoly a, const RatPoly& m) {
  const std::size_t deg = m.size() - 1;
  for (std::size_t i = a.size(); i-- > deg;) {
    if (a[i].isZero()) continue;
    const Rational c = a[i];
    for (std::size_t j = 0; j <= deg; ++j) a[i - deg + j] -= c * m[j];
  }
  if (a.size() > deg) a.resize(deg);
  return a;
}

}  // namespace wem::detail
