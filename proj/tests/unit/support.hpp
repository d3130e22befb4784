#pragma once

#include <array>
#include <cstdint>
#include <random>

#include "kerrfem/mesh.hpp"
#include "kerrfem/vec3.hpp"

namespace kerrfem::test {

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20241015);
  return gen;
}

inline double uniform(double lo = -1.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline Vec3 random_vec(double scale = 1.0) {
  return {scale * uniform(), scale * uniform(), scale * uniform()};
}

/// Random tet whose volume is bounded away from zero, positively oriented.
inline std::array<Vec3, 4> random_tet() {
  for (;;) {
    std::array<Vec3, 4> v{random_vec(), random_vec(), random_vec(), random_vec()};
    const double det = dot(v[1] - v[0], cross(v[2] - v[0], v[3] - v[0]));
    if (std::abs(det) < 0.05) continue;
    if (det < 0) std::swap(v[2], v[3]);
    return v;
  }
}

inline double max_abs_diff(const Mat3& a, const Mat3& b) {
  double m = 0.0;
  for (int i = 0; i < 9; ++i) m = std::max(m, std::abs(a.a[i] - b.a[i]));
  return m;
}

}  // namespace kerrfem::test
