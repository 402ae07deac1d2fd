#include "wem/linalg.hpp"

#include "wem/errors.hpp"

namespace wem {

namespace {

// Reduced row echelon form in place; returns the pivot columns.
std::vector<int> rowReduce(Matrix& a, int columns) {
  std::vector<int> pivots;
  std::size_t row = 0;
  for (int col = 0; col < columns && row < a.size(); ++col) {
    const auto c = static_cast<std::size_t>(col);
    std::size_t p = row;
    while (p < a.size() && a[p][c].isZero()) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[row]);
    const Rational inv = a[row][c].inverse();
    for (auto& x : a[row]) x *= inv;
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (r == row || a[r][c].isZero()) continue;
      const Rational factor = a[r][c];
      for (std::size_t j = 0; j < a[r].size(); ++j) a[r][j] -= factor * a[row][j];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

Rational dot(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw InputError("dimension mismatch in dot product");
  Rational acc(0);
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

int rank(Matrix a) {
  if (a.empty()) return 0;
  return static_cast<int>(rowReduce(a, static_cast<int>(a[0].size())).size());
}

Rational determinant(Matrix a) {
  const std::size_t n = a.size();
  Rational det(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t p = col;
    while (p < n && a[p][col].isZero()) ++p;
    if (p == n) return Rational(0);
    if (p != col) {
      std::swap(a[p], a[col]);
      det = -det;
    }
    det *= a[col][col];
    const Rational inv = a[col][col].inverse();
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a[r][col].isZero()) continue;
      const Rational factor = a[r][col] * inv;
      for (std::size_t j = col; j < n; ++j) a[r][j] -= factor * a[col][j];
    }
  }
  return det;
}

std::optional<Vector> solve(const Matrix& a, const Vector& b) {
  const std::size_t n = a.size();
  Matrix aug = a;
  for (std::size_t i = 0; i < n; ++i) aug[i].push_back(b[i]);
  const auto pivots = rowReduce(aug, static_cast<int>(n));
  if (pivots.size() != n) return std::nullopt;
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = aug[i][n];
  return x;
}

std::optional<Matrix> inverse(const Matrix& a) {
  const std::size_t n = a.size();
  Matrix aug = a;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug[i].emplace_back(i == j ? 1 : 0);
  }
  if (rowReduce(aug, static_cast<int>(n)).size() != n) return std::nullopt;
  Matrix inv(n);
  for (std::size_t i = 0; i < n; ++i) inv[i].assign(aug[i].begin() + static_cast<long>(n), aug[i].end());
  return inv;
}

std::vector<Vector> nullSpace(Matrix a, int columns) {
  const auto pivots = rowReduce(a, columns);
  std::vector<bool> isPivot(static_cast<std::size_t>(columns), false);
  for (int p : pivots) isPivot[static_cast<std::size_t>(p)] = true;
  std::vector<Vector> basis;
  for (int free = 0; free < columns; ++free) {
    if (isPivot[static_cast<std::size_t>(free)]) continue;
    Vector v(static_cast<std::size_t>(columns), Rational(0));
    v[static_cast<std::size_t>(free)] = Rational(1);
    for (std::size_t r = 0; r < pivots.size(); ++r) {
      v[static_cast<std::size_t>(pivots[r])] = -a[r][static_cast<std::size_t>(free)];
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace wem
