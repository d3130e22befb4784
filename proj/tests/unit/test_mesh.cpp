#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <sstream>

#include "kerrfem/error.hpp"
#include "kerrfem/mesh.hpp"
#include "support.hpp"

using namespace kerrfem;

namespace {

double total_volume(const Mesh& m) {
  double v = 0.0;
  for (std::size_t k = 0; k < m.tets.size(); ++k) v += m.volume(k);
  return v;
}

Mesh reference_tet() {
  return make_mesh({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {{0, 1, 2, 3}});
}

}  // namespace

TEST_CASE("structured cube counts") {
  const Mesh m1 = generate_structured_cube(1);
  CHECK(m1.vertices.size() == 8);
  CHECK(m1.tets.size() == 6);
  CHECK(total_volume(m1) == doctest::Approx(1.0).epsilon(1e-14));

  const Mesh m2 = generate_structured_cube(2);
  CHECK(m2.vertices.size() == 27);
  CHECK(m2.tets.size() == 48);
}

TEST_CASE("Kuhn tets of the unit cube are the six monotone vertex paths") {
  // Each Kuhn tet is 0 -> e_a -> e_a + e_b -> (1,1,1) for a permutation (a, b, c).
  const Mesh m = generate_structured_cube(1);
  std::set<std::set<std::size_t>> tets;
  for (const Tet& t : m.tets) tets.insert({t.begin(), t.end()});
  const std::size_t step[3] = {1, 2, 4};
  const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (const auto& p : perms) {
    const std::size_t a = step[p[0]], b = a + step[p[1]];
    CHECK(tets.count({0, a, b, 7}) == 1);
  }
  for (std::size_t k = 0; k < m.tets.size(); ++k) CHECK(m.volume(k) == doctest::Approx(1.0 / 6.0));
}

TEST_CASE("volume partitions the cube and h halves under refinement") {
  for (std::size_t n = 1; n <= 16; n *= 2) {
    const Mesh m = generate_structured_cube(n);
    CHECK(std::abs(total_volume(m) - 1.0) <= 1e-12);
    CHECK(m.mesh_size() == doctest::Approx(std::sqrt(3.0) / static_cast<double>(n)).epsilon(1e-15));
    for (std::size_t k = 0; k < m.tets.size(); ++k) REQUIRE(m.volume(k) > 0.0);
  }
  CHECK(generate_structured_cube(8).mesh_size() == generate_structured_cube(4).mesh_size() / 2.0);
}

TEST_CASE("generate_structured_cube rejects n = 0") {
  CHECK_THROWS_AS(generate_structured_cube(0), InvalidArgument);
}

TEST_CASE("make_mesh validation and orientation") {
  const std::vector<Vec3> v{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  SUBCASE("negative orientation is repaired") {
    const Mesh m = make_mesh(v, {{0, 1, 3, 2}});
    CHECK(m.volume(0) == doctest::Approx(1.0 / 6.0));
  }
  SUBCASE("bad input") {
    CHECK_THROWS_AS(make_mesh(v, {{0, 1, 2, 4}}), InvalidArgument);
    CHECK_THROWS_AS(make_mesh(v, {{0, 1, 2, 2}}), InvalidArgument);
    CHECK_THROWS_AS(make_mesh(v, {{0, 1, 2, 3}, {3, 2, 1, 0}}), InvalidArgument);
    CHECK_THROWS_AS(make_mesh({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {0, 1, 0}}, {{0, 1, 2, 3}}),
                    InvalidArgument);
  }
}

TEST_CASE("tet geometry") {
  const TetGeometry g = tet_geometry(reference_tet(), 0);
  CHECK(test::max_abs_diff(g.jacobian, Mat3::identity()) == 0.0);
  CHECK(g.det == 1.0);

  const TetGeometry g2 = tet_geometry({Vec3{0, 0, 0}, Vec3{2, 0, 0}, Vec3{0, 2, 0}, Vec3{0, 0, 2}});
  CHECK(g2.det == doctest::Approx(8.0));

  for (int trial = 0; trial < 50; ++trial) {
    const TetGeometry r = tet_geometry(test::random_tet());
    const Mat3 prod = r.jacobian * r.inverse_transpose.transposed();
    CHECK(test::max_abs_diff(prod, Mat3::identity()) <= 1e-13);
  }
}

TEST_CASE("topology counts") {
  SUBCASE("n = 1 cube") {
    const Topology t = build_topology(generate_structured_cube(1));
    CHECK(t.num_edges() == 19);
    CHECK(t.num_faces() == 18);
    std::size_t bf = 0;
    for (bool b : t.boundary_face) bf += b;
    CHECK(bf == 12);
    const long euler = static_cast<long>(t.num_vertices()) - static_cast<long>(t.num_edges()) +
                       static_cast<long>(t.num_faces()) - static_cast<long>(t.num_tets());
    CHECK(euler == 1);
  }
  SUBCASE("single tet") {
    const Topology t = build_topology(reference_tet());
    CHECK(t.num_edges() == 6);
    CHECK(t.num_faces() == 4);
    for (bool b : t.boundary_face) CHECK(b);
    for (bool b : t.boundary_edge) CHECK(b);
  }
  SUBCASE("Euler characteristic on refined cubes") {
    for (std::size_t n : {2, 3, 5}) {
      const Topology t = build_topology(generate_structured_cube(n));
      const long euler = static_cast<long>(t.num_vertices()) - static_cast<long>(t.num_edges()) +
                         static_cast<long>(t.num_faces()) - static_cast<long>(t.num_tets());
      CHECK(euler == 1);
    }
  }
}

TEST_CASE("topology orientation conventions") {
  const Mesh m = generate_structured_cube(3);
  const Topology t = build_topology(m);
  for (const auto& e : t.edges) CHECK(e[0] < e[1]);
  for (const auto& f : t.faces) CHECK((f[0] < f[1] && f[1] < f[2]));

  // Interior faces are seen with opposite signs from their two tets.
  std::vector<int> sign_sum(t.num_faces(), 0), count(t.num_faces(), 0);
  for (std::size_t k = 0; k < t.num_tets(); ++k)
    for (int i = 0; i < 4; ++i) {
      sign_sum[t.tet_faces[k][i]] += t.tet_face_signs[k][i];
      ++count[t.tet_faces[k][i]];
    }
  for (std::size_t f = 0; f < t.num_faces(); ++f) {
    CHECK(count[f] == (t.boundary_face[f] ? 1 : 2));
    if (!t.boundary_face[f]) CHECK(sign_sum[f] == 0);
  }

  // Local edge signs follow the global lo -> hi direction.
  for (std::size_t k = 0; k < t.num_tets(); ++k)
    for (int i = 0; i < 6; ++i) {
      const std::size_t a = m.tets[k][kLocalEdges[i][0]], b = m.tets[k][kLocalEdges[i][1]];
      CHECK(t.tet_edge_signs[k][i] == (a < b ? 1 : -1));
    }
}

TEST_CASE("topology is reproducible") {
  const Mesh m = generate_structured_cube(3);
  const Topology a = build_topology(m), b = build_topology(m);
  CHECK(a.edges == b.edges);
  CHECK(a.faces == b.faces);
  CHECK(a.tet_edges == b.tet_edges);
  CHECK(a.tet_face_signs == b.tet_face_signs);
}

TEST_CASE("non-manifold face is rejected") {
  const std::vector<Vec3> v{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0, 0, -1}, {1, 1, 1}};
  CHECK_THROWS_AS(build_topology(make_mesh(v, {{0, 1, 2, 3}, {0, 1, 2, 4}, {0, 1, 2, 5}})),
                  InvalidArgument);
}

TEST_CASE("mesh file round trip") {
  const Mesh m = generate_structured_cube(2);
  std::stringstream ss;
  write_mesh(m, ss);
  const Mesh r = read_mesh(ss);
  REQUIRE(r.vertices.size() == m.vertices.size());
  CHECK(r.tets == m.tets);
  for (std::size_t i = 0; i < m.vertices.size(); ++i) CHECK(norm(r.vertices[i] - m.vertices[i]) == 0.0);

  std::stringstream bad1("tetmesh 2\n0 0\n");
  CHECK_THROWS_AS(read_mesh(bad1), IoError);
  std::stringstream bad2("tetmesh 1\n4 1\n0 0 0\n1 0 0\n");
  CHECK_THROWS_AS(read_mesh(bad2), IoError);
  std::stringstream commented("# unit tet\ntetmesh 1\n4 1\n0 0 0\n1 0 0\n0 1 0\n0 0 1 # apex\n0 1 2 3\n");
  CHECK(read_mesh(commented).tets.size() == 1);
  CHECK_THROWS_AS(read_mesh_file("/nonexistent/dir/mesh.txt"), IoError);
}
