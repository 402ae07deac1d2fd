#include "wem/series.hpp"

namespace wem {

TruncatedSeries<Rational> exponentialSeries(int k) {
  TruncatedSeries<Rational> s(k);
  std::vector<Rational> c(static_cast<std::size_t>(k) + 1);
  for (int j = 0; j <= k; ++j) c[static_cast<std::size_t>(j)] = factorial(j).inverse();
  return TruncatedSeries<Rational>(std::move(c), k);
}

TruncatedSeries<Cyclotomic> toCyclotomic(const TruncatedSeries<Rational>& s, int order) {
  std::vector<Cyclotomic> c;
  c.reserve(s.coefficients().size());
  for (const auto& x : s.coefficients()) c.emplace_back(x, order);
  return TruncatedSeries<Cyclotomic>(std::move(c), s.degreeBound());
}

}  // namespace wem
