#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "kerrfem/vec3.hpp"

namespace kerrfem {

using Tet = std::array<std::size_t, 4>;

/// Tetrahedral mesh. Tets are stored in canonical order: positive signed
/// volume, i.e. det[x1-x0, x2-x0, x3-x0] > 0.
struct Mesh {
  std::vector<Vec3> vertices;
  std::vector<Tet> tets;

  /// Largest tet diameter (longest edge), the mesh parameter h.
  double mesh_size() const;
  double volume(std::size_t tet) const;
};

/// Reorders vertices of every tet for positive orientation and checks the
/// mesh invariants. Throws InvalidArgument on out-of-range indices,
/// duplicate tets or zero-volume tets.
Mesh make_mesh(std::vector<Vec3> vertices, std::vector<Tet> tets);

/// Unit cube split into n^3 subcubes, each cut into 6 Kuhn tetrahedra.
Mesh generate_structured_cube(std::size_t n);

/// Affine map x = x0 + J xi from the reference tet {xi >= 0, sum xi <= 1}.
struct TetGeometry {
  Vec3 origin;
  Mat3 jacobian;
  double det = 0.0;
  Mat3 inverse_transpose;

  double volume() const { return det / 6.0; }
  Vec3 map(const Vec3& ref) const { return origin + jacobian * ref; }
};

TetGeometry tet_geometry(const Mesh& mesh, std::size_t tet);
TetGeometry tet_geometry(const std::array<Vec3, 4>& corners);

/// Local edge (a, b) and face numbering of the reference tet. Face f is the
/// face opposite local vertex f.
inline constexpr std::array<std::array<int, 2>, 6> kLocalEdges{
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
inline constexpr std::array<std::array<int, 3>, 4> kLocalFaces{
    {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}}};

/// Oriented edge/face incidence. Global edges run lo -> hi vertex index;
/// global faces are sorted triples (a, b, c) with normal (xb-xa) x (xc-xa).
struct Topology {
  std::vector<std::array<std::size_t, 2>> edges;
  std::vector<std::array<std::size_t, 3>> faces;

  std::vector<std::array<std::size_t, 6>> tet_edges;
  std::vector<std::array<int, 6>> tet_edge_signs;
  std::vector<std::array<std::size_t, 4>> tet_faces;
  /// +1 iff the local outward normal agrees with the global face normal.
  std::vector<std::array<int, 4>> tet_face_signs;

  std::vector<bool> boundary_vertex;
  std::vector<bool> boundary_edge;
  std::vector<bool> boundary_face;

  std::size_t num_vertices() const { return boundary_vertex.size(); }
  std::size_t num_edges() const { return edges.size(); }
  std::size_t num_faces() const { return faces.size(); }
  std::size_t num_tets() const { return tet_edges.size(); }
};

/// Throws InvalidArgument when a face is shared by more than two tets.
Topology build_topology(const Mesh& mesh);

/// In-house text format: `tetmesh 1`, `<nv> <nt>`, vertex lines, tet lines.
void write_mesh(const Mesh& mesh, std::ostream& out);
void write_mesh_file(const Mesh& mesh, const std::string& path);
Mesh read_mesh(std::istream& in);
Mesh read_mesh_file(const std::string& path);

}  // namespace kerrfem
