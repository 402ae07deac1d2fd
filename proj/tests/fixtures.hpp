#pragma once

// Half-space descriptions of the polytopes used across the test suites.

#include <string>
#include <utility>
#include <vector>

#include "wem/polytope.hpp"

namespace wem::fixture {

inline HalfSpaceDescription make(int n, std::vector<std::pair<std::vector<long>, long>> rows) {
  HalfSpaceDescription d;
  d.dimension = n;
  for (auto& [u, mu] : rows) d.halfspaces.push_back(HalfSpace{std::move(u), mu});
  return d;
}

/// Facets ordered x >= 0, y >= 0, x <= 1, y <= 1.
inline HalfSpaceDescription unitSquare() { return make(2, {{{1, 0}, 0}, {{0, 1}, 0}, {{-1, 0}, 1}, {{0, -1}, 1}}); }
inline HalfSpaceDescription rectangle32() { return make(2, {{{1, 0}, 0}, {{0, 1}, 0}, {{-1, 0}, 3}, {{0, -1}, 2}}); }
/// conv{(0,0), (1,0), (0,2)}: x >= 0, y >= 0, 2x + y <= 2.
inline HalfSpaceDescription triangleT() { return make(2, {{{1, 0}, 0}, {{0, 1}, 0}, {{-2, -1}, 2}}); }
inline HalfSpaceDescription triangle2T() { return make(2, {{{1, 0}, 0}, {{0, 1}, 0}, {{-2, -1}, 4}}); }
inline HalfSpaceDescription cube() {
  return make(3, {{{1, 0, 0}, 0}, {{0, 1, 0}, 0}, {{0, 0, 1}, 0}, {{-1, 0, 0}, 1}, {{0, -1, 0}, 1}, {{0, 0, -1}, 1}});
}
inline HalfSpaceDescription simplex3() {
  return make(3, {{{1, 0, 0}, 0}, {{0, 1, 0}, 0}, {{0, 0, 1}, 0}, {{-1, -1, -1}, 1}});
}
/// x, y, z >= 0, 2x + y + z <= 2: a Z/2 vertex group at (1, 0, 0).
inline HalfSpaceDescription wedge3() {
  return make(3, {{{1, 0, 0}, 0}, {{0, 1, 0}, 0}, {{0, 0, 1}, 0}, {{-2, -1, -1}, 2}});
}

inline std::vector<std::pair<std::string, HalfSpaceDescription>> suite() {
  return {{"unit square", unitSquare()}, {"rectangle 3x2", rectangle32()}, {"T", triangleT()},
          {"2T", triangle2T()},          {"cube", cube()},                 {"simplex3", simplex3()},
          {"wedge3", wedge3()}};
}

}  // namespace wem::fixture
