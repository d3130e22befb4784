#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kerrfem/quadrature.hpp"

using namespace kerrfem;

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

}  // namespace

TEST_CASE("tet rule integrates monomials through degree 5") {
  // int_ref x^a y^b z^c = a! b! c! / (a + b + c + 3)!
  const QuadratureRule& q = tet_rule();
  CHECK(q.points.size() == 14);
  for (int a = 0; a <= 5; ++a)
    for (int b = 0; a + b <= 5; ++b)
      for (int c = 0; a + b + c <= 5; ++c) {
        double s = 0.0;
        for (std::size_t i = 0; i < q.points.size(); ++i)
          s += q.weights[i] * std::pow(q.points[i].x, a) * std::pow(q.points[i].y, b) *
               std::pow(q.points[i].z, c);
        const double exact = factorial(a) * factorial(b) * factorial(c) / factorial(a + b + c + 3);
        CHECK(std::abs(s - exact) <= 1e-14);
      }
  for (double w : q.weights) CHECK(w > 0.0);
}

TEST_CASE("triangle rule integrates monomials through degree 4") {
  // int x^a y^b over the unit triangle = a! b! / (a + b + 2)!
  const QuadratureRule& q = triangle_rule();
  for (int a = 0; a <= 4; ++a)
    for (int b = 0; a + b <= 4; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < q.points.size(); ++i)
        s += q.weights[i] * std::pow(q.points[i].x, a) * std::pow(q.points[i].y, b);
      CHECK(std::abs(s - factorial(a) * factorial(b) / factorial(a + b + 2)) <= 1e-14);
    }
}

TEST_CASE("line rule integrates monomials through degree 7") {
  const QuadratureRule& q = line_rule();
  for (int a = 0; a <= 7; ++a) {
    double s = 0.0;
    for (std::size_t i = 0; i < q.points.size(); ++i) s += q.weights[i] * std::pow(q.points[i].x, a);
    CHECK(std::abs(s - 1.0 / (a + 1)) <= 1e-15);
  }
}
