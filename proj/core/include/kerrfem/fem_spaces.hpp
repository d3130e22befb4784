#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "kerrfem/linalg.hpp"
#include "kerrfem/mesh.hpp"
#include "kerrfem/vec3.hpp"

namespace kerrfem {

/// The discrete spaces of the lowest-order (k = 1) method.
enum class SpaceKind {
  NedelecEdge,          ///< Whitney edge functions, H(curl)-conforming
  NedelecEdgeBC,        ///< as NedelecEdge with tangential trace zero on the boundary
  RaviartThomasFace,    ///< RT0 face functions, H(div)-conforming
  DiscontinuousVector,  ///< piecewise-constant vector fields
  LagrangeScalar,       ///< continuous P1, one vertex pinned as the constant gauge
};

const char* to_string(SpaceKind kind);

/// Reference-element Whitney basis w_ab = l_a grad l_b - l_b grad l_a for the
/// six local edges, with constant curls 2 grad l_a x grad l_b.
struct EdgeBasis {
  std::array<Vec3, 6> values;
  std::array<Vec3, 6> curls;
};

/// Reference-element RT0 basis, one function per local face with unit
/// outward flux through that face.
struct FaceBasis {
  std::array<Vec3, 4> values;
  std::array<double, 4> divs;
};

EdgeBasis eval_edge_basis(const Vec3& ref_point);
FaceBasis eval_face_basis(const Vec3& ref_point);

/// Barycentric-coordinate gradients on the reference tet.
std::array<Vec3, 4> reference_barycentric_gradients();

/// Covariant (H(curl)) and contravariant (H(div)) Piola maps. The geometry
/// comes from tet_geometry, which already rejects degenerate tets.
EdgeBasis push_forward(const TetGeometry& geom, const EdgeBasis& ref);
FaceBasis push_forward(const TetGeometry& geom, const FaceBasis& ref);

/// Physical barycentric gradients on a tet.
std::array<Vec3, 4> barycentric_gradients(const TetGeometry& geom);

struct DofMap {
  SpaceKind kind = SpaceKind::NedelecEdge;
  std::size_t num_dofs = 0;
  int dofs_per_tet = 0;
  /// Flattened per-tet (global dof, sign); kNoDof marks a removed gauge dof.
  std::vector<std::size_t> tet_dofs;
  std::vector<int> tet_signs;
  /// Dofs fixed to zero (NedelecEdgeBC only).
  std::vector<bool> constrained;
  std::vector<std::size_t> constrained_dofs;
  /// Vertex pinned for LagrangeScalar; kNoDof when no gauge is applied.
  std::size_t gauge_vertex = kNoDof;

  std::span<const std::size_t> dofs(std::size_t tet) const {
    return {tet_dofs.data() + tet * dofs_per_tet, static_cast<std::size_t>(dofs_per_tet)};
  }
  std::span<const int> signs(std::size_t tet) const {
    return {tet_signs.data() + tet * dofs_per_tet, static_cast<std::size_t>(dofs_per_tet)};
  }
  std::size_t num_free() const { return num_dofs - constrained_dofs.size(); }
};

struct DofMapOptions {
  int order = 1;
  /// LagrangeScalar gauge vertex; kNoDof keeps every vertex.
  std::size_t gauge_vertex = 0;
};

/// Throws InvalidArgument for order != 1.
DofMap build_dof_map(SpaceKind kind, const Topology& topo, DofMapOptions options = {});

}  // namespace kerrfem
