#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include "kerrfem/error.hpp"
#include "kerrfem/material.hpp"
#include "support.hpp"

using namespace kerrfem;

namespace {

MaterialParams random_params() {
  return {test::uniform(0.1, 3.0), test::uniform(0.1, 3.0), test::uniform(0.0, 4.0),
          test::uniform(0.0, 4.0)};
}

Eigen::Matrix3d to_eigen(const Mat3& m) {
  Eigen::Matrix3d e;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) e(r, c) = m(r, c);
  return e;
}

const MaterialParams kUnitKerr{1.0, 1.0, 0.0, 1.0};

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(MaterialParams{}.validate());
  CHECK_THROWS_AS((MaterialParams{0.0, 1.0, 0.0, 0.0}.validate()), InvalidArgument);
  CHECK_THROWS_AS((MaterialParams{1.0, -1.0, 0.0, 0.0}.validate()), InvalidArgument);
  CHECK_THROWS_AS((MaterialParams{1.0, 1.0, -0.1, 0.0}.validate()), InvalidArgument);
  CHECK_THROWS_AS((MaterialParams{1.0, 1.0, 0.0, -1.0}.validate()), InvalidArgument);
}

TEST_CASE("eps_matrix hand values and positivity") {
  const Mat3 vac = eps_matrix({2.0, 1.0, 0.0, 0.0}, {3, -1, 2});
  CHECK(test::max_abs_diff(vac, 2.0 * Mat3::identity()) == 0.0);

  const Mat3 e = eps_matrix(kUnitKerr, {1, 0, 0});
  Mat3 expect;
  expect(0, 0) = 4;
  expect(1, 1) = 2;
  expect(2, 2) = 2;
  CHECK(test::max_abs_diff(e, expect) <= 1e-15);

  // Smallest eigenvalue >= eps0 (dense symmetric eigen-solver as oracle).
  for (int i = 0; i < 1000; ++i) {
    const MaterialParams p = random_params();
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(to_eigen(eps_matrix(p, test::random_vec(2.0))));
    CHECK(es.eigenvalues().minCoeff() >= p.eps0 * (1.0 - 1e-14));
  }
}

TEST_CASE("cm_matrix is the scaled inverse of eps_matrix") {
  const Mat3 c = cm_matrix(kUnitKerr, {1, 0, 0});
  Mat3 expect;
  expect(0, 0) = 0.25;
  expect(1, 1) = 0.5;
  expect(2, 2) = 0.5;
  CHECK(test::max_abs_diff(c, expect) <= 1e-15);
  CHECK(test::max_abs_diff(cm_matrix(MaterialParams{}, {1, 2, 3}), Mat3::identity()) == 0.0);

  for (int i = 0; i < 1000; ++i) {
    const MaterialParams p = random_params();
    const Vec3 e = test::random_vec(2.0);
    const Eigen::Matrix3d inv = to_eigen(eps_matrix(p, e)).inverse() * p.eps0;
    CHECK((to_eigen(cm_matrix(p, e)) - inv).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("d_of_e hand values and Jacobian") {
  CHECK(norm(d_of_e(kUnitKerr, {})) == 0.0);
  CHECK(norm(d_of_e(kUnitKerr, {1, 0, 0}) - Vec3{2, 0, 0}) <= 1e-15);
  // Central differences of D(E) reproduce eps(E).
  const double step = 1e-5;
  for (int i = 0; i < 50; ++i) {
    const MaterialParams p = random_params();
    const Vec3 e = test::random_vec();
    const Mat3 eps = eps_matrix(p, e);
    for (int c = 0; c < 3; ++c) {
      Vec3 de;
      de[c] = step;
      const Vec3 col = (d_of_e(p, e + de) - d_of_e(p, e - de)) / (2.0 * step);
      for (int r = 0; r < 3; ++r) CHECK(std::abs(col[r] - eps(r, c)) <= 1e-6 * (1.0 + std::abs(eps(r, c))));
    }
  }
}

TEST_CASE("e_of_d inverts d_of_e") {
  CHECK(norm(e_of_d(kUnitKerr, {})) == 0.0);
  CHECK(norm(e_of_d(kUnitKerr, {2, 0, 0}) - Vec3{1, 0, 0}) <= 1e-15);
  for (int i = 0; i < 1000; ++i) {
    const MaterialParams p = random_params();
    const Vec3 d = test::random_vec(std::pow(10.0, test::uniform(-3, 3)));
    CHECK(norm(d_of_e(p, e_of_d(p, d)) - d) <= 1e-12 * norm(d));
  }
  // Extreme nonlinearity still converges.
  const MaterialParams stiff{1.0, 1.0, 0.0, 1e6};
  const Vec3 d{1e3, -2e3, 5e2};
  CHECK(norm(d_of_e(stiff, e_of_d(stiff, d)) - d) <= 1e-12 * norm(d));
}

TEST_CASE("energy density") {
  CHECK(energy_density(kUnitKerr, {}, {}) == 0.0);
  CHECK(energy_density({1, 1, 1, 2}, {1, 0, 0}, {0, 1, 0}) == doctest::Approx(3.0).epsilon(1e-15));
  const MaterialParams lin{2.0, 3.0, 0.5, 0.0};
  const Vec3 e{1, 2, -1}, h{0.5, 0, 2};
  CHECK(energy_density(lin, e, h) ==
        doctest::Approx(0.5 * (2.0 * 1.5 * norm2(e) + 3.0 * norm2(h))).epsilon(1e-15));
}

TEST_CASE("chain rule: d/dt W_E(E(t)) = E . eps(E) E'") {
  // E(t) = a + t b + t^2 c; compare a central difference of W_E with the pairing.
  for (int i = 0; i < 50; ++i) {
    const MaterialParams p = random_params();
    const Vec3 a = test::random_vec(), b = test::random_vec(), c = test::random_vec();
    auto path = [&](double t) { return a + t * b + (t * t) * c; };
    const double t = test::uniform(), dt = 1e-4;
    const double fd = (electric_energy_density(p, path(t + dt)) - electric_energy_density(p, path(t - dt))) / (2 * dt);
    const Vec3 et = path(t), det = b + (2 * t) * c;
    const double exact = dot(et, eps_matrix(p, et) * det);
    CHECK(std::abs(fd - exact) <= 1e-6 * (1.0 + std::abs(exact)));
  }
}
