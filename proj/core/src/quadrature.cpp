#include "kerrfem/quadrature.hpp"

#include <cmath>

namespace kerrfem {

namespace {

QuadratureRule make_tet_rule() {
  QuadratureRule r;
  r.degree = 5;
  auto orbit4 = [&r](double a, double w) {
    const double b = 1.0 - 3.0 * a;
    for (const Vec3& p : {Vec3{a, a, a}, Vec3{b, a, a}, Vec3{a, b, a}, Vec3{a, a, b}}) {
      r.points.push_back(p);
      r.weights.push_back(w);
    }
  };
  orbit4(0.0927352503108912264, 0.01224884051939365826);
  orbit4(0.3108859192633006098, 0.01878132095300264180);
  // Edge-midpoint orbit: two barycentrics c, two d.
  const double c = 0.4544962958743503604;
  const double d = 0.5 - c;
  const double w = 0.007091003462846911;
  // Barycentric (l0, l1, l2, l3) -> Cartesian (l1, l2, l3).
  const std::array<std::array<double, 4>, 6> bary{{{c, c, d, d},
                                                   {c, d, c, d},
                                                   {c, d, d, c},
                                                   {d, c, c, d},
                                                   {d, c, d, c},
                                                   {d, d, c, c}}};
  for (const auto& l : bary) {
    r.points.push_back({l[1], l[2], l[3]});
    r.weights.push_back(w);
  }
  return r;
}

QuadratureRule make_triangle_rule() {
  QuadratureRule r;
  r.degree = 4;
  auto orbit3 = [&r](double a, double w) {
    const double b = 1.0 - 2.0 * a;
    for (const Vec3& p : {Vec3{a, a, 0}, Vec3{b, a, 0}, Vec3{a, b, 0}}) {
      r.points.push_back(p);
      r.weights.push_back(0.5 * w);
    }
  };
  orbit3(0.445948490915965, 0.223381589678011);
  orbit3(0.091576213509771, 0.109951743655322);
  return r;
}

QuadratureRule make_line_rule() {
  QuadratureRule r;
  r.degree = 7;
  const double a = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
  const double b = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
  const double wa = (18.0 + std::sqrt(30.0)) / 36.0;
  const double wb = (18.0 - std::sqrt(30.0)) / 36.0;
  for (auto [x, w] : {std::pair{-b, wb}, std::pair{-a, wa}, std::pair{a, wa}, std::pair{b, wb}}) {
    r.points.push_back({0.5 * (x + 1.0), 0, 0});
    r.weights.push_back(0.5 * w);
  }
  return r;
}

}  // namespace

const QuadratureRule& tet_rule() {
  static const QuadratureRule rule = make_tet_rule();
  return rule;
}

const QuadratureRule& triangle_rule() {
  static const QuadratureRule rule = make_triangle_rule();
  return rule;
}

const QuadratureRule& line_rule() {
  static const QuadratureRule rule = make_line_rule();
  return rule;
}

}  // namespace kerrfem
