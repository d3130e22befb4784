#pragma once

#include <array>
#include <vector>

#include "kerrfem/vec3.hpp"

namespace kerrfem {

/// Points in reference coordinates and weights summing to the reference
/// measure (1/6 for the tet, 1/2 for the triangle, 1 for the segment).
struct QuadratureRule {
  std::vector<Vec3> points;
  std::vector<double> weights;
  int degree = 0;
};

/// 14-point positive-weight rule on the reference tet, exact through degree 5.
const QuadratureRule& tet_rule();

/// 6-point rule on the reference triangle {(s, t) : s, t >= 0, s + t <= 1},
/// exact through degree 4. Points carry (s, t, 0).
const QuadratureRule& triangle_rule();

/// 4-point Gauss-Legendre rule on [0, 1], exact through degree 7. Points
/// carry (s, 0, 0).
const QuadratureRule& line_rule();

}  // namespace kerrfem
