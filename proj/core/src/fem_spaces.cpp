#include "kerrfem/fem_spaces.hpp"

#include "kerrfem/error.hpp"

namespace kerrfem {

const char* to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::NedelecEdge: return "NedelecEdge";
    case SpaceKind::NedelecEdgeBC: return "NedelecEdgeBC";
    case SpaceKind::RaviartThomasFace: return "RaviartThomasFace";
    case SpaceKind::DiscontinuousVector: return "DiscontinuousVector";
    case SpaceKind::LagrangeScalar: return "LagrangeScalar";
  }
  return "?";
}

std::array<Vec3, 4> reference_barycentric_gradients() {
  return {Vec3{-1, -1, -1}, Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
}

EdgeBasis eval_edge_basis(const Vec3& p) {
  const std::array<double, 4> lambda{1.0 - p.x - p.y - p.z, p.x, p.y, p.z};
  const auto grad = reference_barycentric_gradients();
  EdgeBasis b;
  for (int e = 0; e < 6; ++e) {
    const auto [i, j] = kLocalEdges[e];
    b.values[e] = lambda[i] * grad[j] - lambda[j] * grad[i];
    b.curls[e] = 2.0 * cross(grad[i], grad[j]);
  }
  return b;
}

FaceBasis eval_face_basis(const Vec3& p) {
  static constexpr std::array<Vec3, 4> kRefVertices{
      Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
  // phi_f = (x - v_f) / (3 |K|) with |K| = 1/6.
  FaceBasis b;
  for (int f = 0; f < 4; ++f) {
    b.values[f] = 2.0 * (p - kRefVertices[f]);
    b.divs[f] = 6.0;
  }
  return b;
}

EdgeBasis push_forward(const TetGeometry& g, const EdgeBasis& ref) {
  EdgeBasis out;
  for (int e = 0; e < 6; ++e) {
    out.values[e] = g.inverse_transpose * ref.values[e];
    out.curls[e] = (1.0 / g.det) * (g.jacobian * ref.curls[e]);
  }
  return out;
}

FaceBasis push_forward(const TetGeometry& g, const FaceBasis& ref) {
  FaceBasis out;
  for (int f = 0; f < 4; ++f) {
    out.values[f] = (1.0 / g.det) * (g.jacobian * ref.values[f]);
    out.divs[f] = ref.divs[f] / g.det;
  }
  return out;
}

std::array<Vec3, 4> barycentric_gradients(const TetGeometry& g) {
  auto grads = reference_barycentric_gradients();
  for (Vec3& v : grads) v = g.inverse_transpose * v;
  return grads;
}

DofMap build_dof_map(SpaceKind kind, const Topology& topo, DofMapOptions options) {
  if (options.order != 1)
    throw InvalidArgument("only polynomial order k = 1 is implemented (got k = " +
                          std::to_string(options.order) + ")");
  DofMap map;
  map.kind = kind;
  const std::size_t nt = topo.num_tets();

  switch (kind) {
    case SpaceKind::NedelecEdge:
    case SpaceKind::NedelecEdgeBC: {
      map.num_dofs = topo.num_edges();
      map.dofs_per_tet = 6;
      for (std::size_t k = 0; k < nt; ++k)
        for (int e = 0; e < 6; ++e) {
          map.tet_dofs.push_back(topo.tet_edges[k][e]);
          map.tet_signs.push_back(topo.tet_edge_signs[k][e]);
        }
      map.constrained.assign(map.num_dofs, false);
      if (kind == SpaceKind::NedelecEdgeBC) {
        for (std::size_t e = 0; e < topo.num_edges(); ++e)
          if (topo.boundary_edge[e]) {
            map.constrained[e] = true;
            map.constrained_dofs.push_back(e);
          }
      }
      break;
    }
    case SpaceKind::RaviartThomasFace: {
      map.num_dofs = topo.num_faces();
      map.dofs_per_tet = 4;
      for (std::size_t k = 0; k < nt; ++k)
        for (int f = 0; f < 4; ++f) {
          map.tet_dofs.push_back(topo.tet_faces[k][f]);
          map.tet_signs.push_back(topo.tet_face_signs[k][f]);
        }
      map.constrained.assign(map.num_dofs, false);
      break;
    }
    case SpaceKind::DiscontinuousVector: {
      map.num_dofs = 3 * nt;
      map.dofs_per_tet = 3;
      for (std::size_t k = 0; k < nt; ++k)
        for (std::size_t c = 0; c < 3; ++c) {
          map.tet_dofs.push_back(3 * k + c);
          map.tet_signs.push_back(1);
        }
      map.constrained.assign(map.num_dofs, false);
      break;
    }
    case SpaceKind::LagrangeScalar: {
      const std::size_t nv = topo.num_vertices();
      if (options.gauge_vertex != kNoDof && options.gauge_vertex >= nv)
        throw InvalidArgument("gauge vertex out of range");
      map.gauge_vertex = options.gauge_vertex;
      std::vector<std::size_t> vertex_dof(nv);
      std::size_t next = 0;
      for (std::size_t v = 0; v < nv; ++v)
        vertex_dof[v] = (v == options.gauge_vertex) ? kNoDof : next++;
      map.num_dofs = next;
      map.dofs_per_tet = 4;
      // Vertex ids per tet are recovered from the tet's edges.
      for (std::size_t k = 0; k < nt; ++k) {
        std::array<std::size_t, 4> verts{};
        for (int e = 0; e < 6; ++e) {
          const auto [la, lb] = kLocalEdges[e];
          const auto& edge = topo.edges[topo.tet_edges[k][e]];
          const bool forward = topo.tet_edge_signs[k][e] > 0;
          verts[la] = forward ? edge[0] : edge[1];
          verts[lb] = forward ? edge[1] : edge[0];
        }
        for (int i = 0; i < 4; ++i) {
          map.tet_dofs.push_back(vertex_dof[verts[i]]);
          map.tet_signs.push_back(1);
        }
      }
      map.constrained.assign(map.num_dofs, false);
      break;
    }
  }
  return map;
}

}  // namespace kerrfem
