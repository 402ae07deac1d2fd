#pragma once

// Dense exact linear algebra over Q at desk scale.

#include <optional>
#include <vector>

#include "wem/rational.hpp"

namespace wem {

using Vector = std::vector<Rational>;
using Matrix = std::vector<Vector>;  // row-major

int rank(Matrix a);
Rational determinant(Matrix a);
/// Solution of the square system a x = b, empty when a is singular.
std::optional<Vector> solve(const Matrix& a, const Vector& b);
std::optional<Matrix> inverse(const Matrix& a);
/// A basis of {x : a x = 0}.
std::vector<Vector> nullSpace(Matrix a, int columns);
Rational dot(const Vector& a, const Vector& b);

}  // namespace wem
