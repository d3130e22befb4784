#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include "kerrfem/error.hpp"
#include "kerrfem/linalg.hpp"
#include "support.hpp"

using namespace kerrfem;

namespace {

Eigen::MatrixXd dense(const SparseMatrix& a) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(a.rows()), static_cast<Eigen::Index>(a.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a.coeff(i, j);
  return d;
}

SparseMatrix random_sparse(std::size_t rows, std::size_t cols, std::size_t n, std::vector<Triplet>* out = nullptr) {
  std::vector<Triplet> t;
  std::uniform_int_distribution<std::size_t> ri(0, rows - 1), ci(0, cols - 1);
  for (std::size_t k = 0; k < n; ++k) t.push_back({ri(test::rng()), ci(test::rng()), test::uniform()});
  if (out) *out = t;
  return SparseMatrix::from_triplets(rows, cols, t);
}

SparseMatrix random_spd(std::size_t n) {
  // B^T B + n I with sparse B.
  const SparseMatrix b = random_sparse(n, n, 4 * n);
  const Eigen::MatrixXd d = dense(b).transpose() * dense(b) + Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) != 0.0) t.push_back({i, j, d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))});
  return SparseMatrix::from_triplets(n, n, t);
}

Eigen::VectorXd to_eigen(const Vector& v) { return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())); }

}  // namespace

TEST_CASE("triplet assembly") {
  const std::vector<Triplet> dup{{0, 0, 1.0}, {0, 0, 2.0}};
  const SparseMatrix a = SparseMatrix::from_triplets(2, 2, dup);
  CHECK(a.nonzeros() == 1);
  CHECK(a.coeff(0, 0) == 3.0);

  const SparseMatrix z = SparseMatrix::from_triplets(3, 4, {});
  CHECK(z.rows() == 3);
  CHECK(z.cols() == 4);
  CHECK(z.nonzeros() == 0);
  CHECK(z.coeff(2, 3) == 0.0);

  const std::vector<Triplet> bad{{3, 0, 1.0}};
  CHECK_THROWS_AS(SparseMatrix::from_triplets(3, 3, bad), InvalidArgument);

  std::vector<Triplet> t;
  const SparseMatrix r = random_sparse(30, 20, 200, &t);
  Eigen::MatrixXd oracle = Eigen::MatrixXd::Zero(30, 20);
  for (const Triplet& e : t) oracle(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col)) += e.value;
  CHECK((dense(r) - oracle).cwiseAbs().maxCoeff() <= 1e-15);
  // Columns sorted and unique per row.
  for (std::size_t i = 0; i < r.rows(); ++i)
    for (std::size_t p = r.offsets()[i] + 1; p < r.offsets()[i + 1]; ++p)
      CHECK(r.col_indices()[p - 1] < r.col_indices()[p]);
}

TEST_CASE("products, transpose and submatrix match a dense oracle") {
  for (int trial = 0; trial < 5; ++trial) {
    const SparseMatrix a = random_sparse(100, 100, 1500);
    Vector x(100);
    for (double& v : x) v = test::uniform();
    const Eigen::VectorXd y = dense(a) * to_eigen(x);
    const Vector ys = a * x;
    CHECK((to_eigen(ys) - y).norm() <= 1e-13 * y.norm());
    const Eigen::VectorXd yt = dense(a).transpose() * to_eigen(x);
    CHECK((to_eigen(a.multiply_transpose(x)) - yt).norm() <= 1e-13 * yt.norm());
    CHECK((dense(a.transposed()) - dense(a).transpose()).cwiseAbs().maxCoeff() == 0.0);
  }
  const SparseMatrix a = random_sparse(6, 5, 20);
  const std::vector<std::size_t> rmap{0, kNoDof, 1, kNoDof, 2, 3};
  const std::vector<std::size_t> cmap{kNoDof, 0, 1, kNoDof, 2};
  const SparseMatrix s = a.submatrix(rmap, 4, cmap, 3);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 5; ++j)
      if (rmap[i] != kNoDof && cmap[j] != kNoDof) CHECK(s.coeff(rmap[i], cmap[j]) == a.coeff(i, j));
  CHECK(a.diagonal().size() == 5);
}

TEST_CASE("restrict and extend") {
  const Vector full{1, 2, 3, 4};
  const std::vector<std::size_t> map{kNoDof, 0, kNoDof, 1};
  const Vector c = restrict_vector(full, map, 2);
  CHECK(c == Vector{2, 4});
  CHECK(extend_vector(c, map) == Vector{0, 2, 0, 4});
}

TEST_CASE("conjugate gradients") {
  SUBCASE("identity") {
    const std::vector<Triplet> t{{0, 0, 1}, {1, 1, 1}, {2, 2, 1}};
    const SparseMatrix i3 = SparseMatrix::from_triplets(3, 3, t);
    const Vector b{1, -2, 3};
    const CgResult r = cg_solve(i3, b, 1e-12);
    CHECK(r.iterations <= 1);
    CHECK(r.x == b);
  }
  SUBCASE("2x2 hand solve") {
    const std::vector<Triplet> t{{0, 0, 2}, {0, 1, 1}, {1, 0, 1}, {1, 1, 2}};
    const CgResult r = cg_solve(SparseMatrix::from_triplets(2, 2, t), Vector{1, 1}, 1e-14);
    CHECK(r.x[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(r.x[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  }
  SUBCASE("random SPD against dense Cholesky") {
    for (int trial = 0; trial < 5; ++trial) {
      const SparseMatrix a = random_spd(50);
      Vector b(50);
      for (double& v : b) v = test::uniform();
      const CgResult r = cg_solve(a, b, 1e-12);
      const Eigen::VectorXd oracle = dense(a).llt().solve(to_eigen(b));
      CHECK((to_eigen(r.x) - oracle).norm() <= 1e-8 * oracle.norm());
      // Residual contract.
      Vector res = a * r.x;
      axpy(-1.0, b, res);
      CHECK(norm(res) <= 1e-12 * norm(b));
      CHECK(r.relative_residual <= 1e-12);
    }
  }
  SUBCASE("zero right-hand side") {
    const SparseMatrix a = random_spd(10);
    const CgResult r = cg_solve(a, Vector(10, 0.0), 1e-12);
    CHECK(norm(r.x) == 0.0);
  }
  SUBCASE("indefinite matrix is reported") {
    const std::vector<Triplet> t{{0, 0, 1}, {1, 1, -1}};
    CHECK_THROWS_AS(cg_solve(SparseMatrix::from_triplets(2, 2, t), Vector{1, 1}, 1e-12), SolverError);
  }
}

TEST_CASE("saddle-point solve") {
  SUBCASE("hand solve") {
    const std::vector<Triplet> ta{{0, 0, 1}, {1, 1, 1}}, tb{{0, 0, 1}, {0, 1, 1}};
    const SaddleSolution s = solve_saddle(SparseMatrix::from_triplets(2, 2, ta),
                                          SparseMatrix::from_triplets(1, 2, tb), Vector{1, 0},
                                          Vector{0}, 1e-12);
    CHECK(s.u[0] == doctest::Approx(0.5));
    CHECK(s.u[1] == doctest::Approx(-0.5));
    CHECK(s.p[0] == doctest::Approx(0.5));
  }
  SUBCASE("no constraints reduces to a plain solve") {
    const SparseMatrix a = random_spd(20);
    Vector f(20);
    for (double& v : f) v = test::uniform();
    const SaddleSolution s = solve_saddle(a, SparseMatrix(0, 20), f, Vector{}, 1e-12);
    CHECK((to_eigen(s.u) - to_eigen(cg_solve(a, f, 1e-13).x)).norm() <= 1e-9);
  }
  SUBCASE("random constrained system against dense LU") {
    const SparseMatrix a = random_spd(30);
    const SparseMatrix b = random_sparse(5, 30, 40);
    Vector f(30), g(5);
    for (double& v : f) v = test::uniform();
    for (double& v : g) v = test::uniform();
    const SaddleSolution s = solve_saddle(a, b, f, g, 1e-10);
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(35, 35);
    k.topLeftCorner(30, 30) = dense(a);
    k.topRightCorner(30, 5) = dense(b).transpose();
    k.bottomLeftCorner(5, 30) = dense(b);
    Eigen::VectorXd rhs(35);
    rhs << to_eigen(f), to_eigen(g);
    const Eigen::VectorXd oracle = k.fullPivLu().solve(rhs);
    CHECK((to_eigen(s.u) - oracle.head(30)).norm() <= 1e-9 * oracle.norm());
  }
  SUBCASE("singular system is reported") {
    const std::vector<Triplet> ta{{0, 0, 1}, {1, 1, 1}}, tb{{0, 0, 1}, {1, 0, 1}};
    CHECK_THROWS_AS(solve_saddle(SparseMatrix::from_triplets(2, 2, ta), SparseMatrix::from_triplets(2, 2, tb),
                                 Vector{1, 0}, Vector{0, 1}, 1e-12),
                    SolverError);
  }
}
