#include "kerrfem/assembly.hpp"

#include <algorithm>

#include "kerrfem/error.hpp"
#include "kerrfem/quadrature.hpp"

namespace kerrfem {

const char* to_string(Formulation f) {
  return f == Formulation::LeeMadsen ? "lee-madsen" : "nedelec";
}

Discretization Discretization::build(Mesh mesh, std::size_t gauge_vertex) {
  Discretization d;
  d.mesh = std::move(mesh);
  d.topo = build_topology(d.mesh);
  d.geometry.reserve(d.mesh.tets.size());
  for (std::size_t k = 0; k < d.mesh.tets.size(); ++k) d.geometry.push_back(tet_geometry(d.mesh, k));
  d.edge = build_dof_map(SpaceKind::NedelecEdge, d.topo);
  d.edge_bc = build_dof_map(SpaceKind::NedelecEdgeBC, d.topo);
  d.face = build_dof_map(SpaceKind::RaviartThomasFace, d.topo);
  d.cell = build_dof_map(SpaceKind::DiscontinuousVector, d.topo);
  d.vertex = build_dof_map(SpaceKind::LagrangeScalar, d.topo, {.gauge_vertex = gauge_vertex});
  d.free_edge_index.assign(d.topo.num_edges(), kNoDof);
  for (std::size_t e = 0; e < d.topo.num_edges(); ++e)
    if (!d.edge_bc.constrained[e]) {
      d.free_edge_index[e] = d.free_edges.size();
      d.free_edges.push_back(e);
    }
  d.h = d.mesh.mesh_size();
  return d;
}

EdgeBasis edge_basis_at(const Discretization& d, std::size_t tet, const Vec3& ref_point) {
  EdgeBasis b = push_forward(d.geometry[tet], eval_edge_basis(ref_point));
  const auto& s = d.topo.tet_edge_signs[tet];
  for (int i = 0; i < 6; ++i)
    if (s[i] < 0) {
      b.values[i] = -b.values[i];
      b.curls[i] = -b.curls[i];
    }
  return b;
}

FaceBasis face_basis_at(const Discretization& d, std::size_t tet, const Vec3& ref_point) {
  FaceBasis b = push_forward(d.geometry[tet], eval_face_basis(ref_point));
  const auto& s = d.topo.tet_face_signs[tet];
  for (int i = 0; i < 4; ++i)
    if (s[i] < 0) {
      b.values[i] = -b.values[i];
      b.divs[i] = -b.divs[i];
    }
  return b;
}

Vec3 eval_edge_field(const Discretization& d, std::span<const double> coeffs, std::size_t tet,
                     const Vec3& ref_point) {
  const EdgeBasis b = edge_basis_at(d, tet, ref_point);
  Vec3 v;
  for (int i = 0; i < 6; ++i) v += coeffs[d.topo.tet_edges[tet][i]] * b.values[i];
  return v;
}

Vec3 eval_edge_curl(const Discretization& d, std::span<const double> coeffs, std::size_t tet) {
  const EdgeBasis b = edge_basis_at(d, tet, {0.25, 0.25, 0.25});
  Vec3 v;
  for (int i = 0; i < 6; ++i) v += coeffs[d.topo.tet_edges[tet][i]] * b.curls[i];
  return v;
}

Vec3 eval_face_field(const Discretization& d, std::span<const double> coeffs, std::size_t tet,
                     const Vec3& ref_point) {
  const FaceBasis b = face_basis_at(d, tet, ref_point);
  Vec3 v;
  for (int i = 0; i < 4; ++i) v += coeffs[d.topo.tet_faces[tet][i]] * b.values[i];
  return v;
}

double eval_face_div(const Discretization& d, std::span<const double> coeffs, std::size_t tet) {
  const FaceBasis b = face_basis_at(d, tet, {0.25, 0.25, 0.25});
  double s = 0.0;
  for (int i = 0; i < 4; ++i) s += coeffs[d.topo.tet_faces[tet][i]] * b.divs[i];
  return s;
}

Vec3 eval_cell_field(std::span<const double> coeffs, std::size_t tet) {
  return {coeffs[3 * tet], coeffs[3 * tet + 1], coeffs[3 * tet + 2]};
}

namespace {

std::array<double, 4> barycentric(const Vec3& p) { return {1.0 - p.x - p.y - p.z, p.x, p.y, p.z}; }

// Free-edge index of a full edge for the given space (identity for U_h).
std::size_t edge_row(const Discretization& d, SpaceKind kind, std::size_t edge) {
  return kind == SpaceKind::NedelecEdgeBC ? d.free_edge_index[edge] : edge;
}

std::size_t edge_space_size(const Discretization& d, SpaceKind kind) {
  return kind == SpaceKind::NedelecEdgeBC ? d.free_edges.size() : d.topo.num_edges();
}

std::size_t edge_index(const Topology& topo, std::size_t a, std::size_t b) {
  const std::array<std::size_t, 2> key{std::min(a, b), std::max(a, b)};
  auto it = std::lower_bound(topo.edges.begin(), topo.edges.end(), key);
  return static_cast<std::size_t>(it - topo.edges.begin());
}

}  // namespace

SparseMatrix assemble_mass(const Discretization& d, SpaceKind kind, double weight) {
  return assemble_mass(d, kind, [weight](const Vec3&) { return weight; });
}

SparseMatrix assemble_mass(const Discretization& d, SpaceKind kind, const ScalarField& weight) {
  const QuadratureRule& q = tet_rule();
  std::vector<Triplet> t;
  std::size_t n = 0;
  switch (kind) {
    case SpaceKind::NedelecEdge:
    case SpaceKind::NedelecEdgeBC: {
      n = edge_space_size(d, kind);
      for (std::size_t k = 0; k < d.num_tets(); ++k) {
        double local[6][6] = {};
        for (std::size_t iq = 0; iq < q.points.size(); ++iq) {
          const EdgeBasis b = edge_basis_at(d, k, q.points[iq]);
          const double w = q.weights[iq] * d.geometry[k].det * weight(d.geometry[k].map(q.points[iq]));
          for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) local[i][j] += w * dot(b.values[i], b.values[j]);
        }
        for (int i = 0; i < 6; ++i) {
          const std::size_t r = edge_row(d, kind, d.topo.tet_edges[k][i]);
          if (r == kNoDof) continue;
          for (int j = 0; j < 6; ++j) {
            const std::size_t c = edge_row(d, kind, d.topo.tet_edges[k][j]);
            if (c != kNoDof) t.push_back({r, c, local[i][j]});
          }
        }
      }
      break;
    }
    case SpaceKind::RaviartThomasFace: {
      n = d.topo.num_faces();
      for (std::size_t k = 0; k < d.num_tets(); ++k) {
        double local[4][4] = {};
        for (std::size_t iq = 0; iq < q.points.size(); ++iq) {
          const FaceBasis b = face_basis_at(d, k, q.points[iq]);
          const double w = q.weights[iq] * d.geometry[k].det * weight(d.geometry[k].map(q.points[iq]));
          for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) local[i][j] += w * dot(b.values[i], b.values[j]);
        }
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j)
            t.push_back({d.topo.tet_faces[k][i], d.topo.tet_faces[k][j], local[i][j]});
      }
      break;
    }
    case SpaceKind::DiscontinuousVector: {
      n = 3 * d.num_tets();
      for (std::size_t k = 0; k < d.num_tets(); ++k) {
        double s = 0.0;
        for (std::size_t iq = 0; iq < q.points.size(); ++iq)
          s += q.weights[iq] * d.geometry[k].det * weight(d.geometry[k].map(q.points[iq]));
        for (std::size_t c = 0; c < 3; ++c) t.push_back({3 * k + c, 3 * k + c, s});
      }
      break;
    }
    case SpaceKind::LagrangeScalar: {
      n = d.vertex.num_dofs;
      for (std::size_t k = 0; k < d.num_tets(); ++k) {
        const auto dofs = d.vertex.dofs(k);
        double local[4][4] = {};
        for (std::size_t iq = 0; iq < q.points.size(); ++iq) {
          const auto l = barycentric(q.points[iq]);
          const double w = q.weights[iq] * d.geometry[k].det * weight(d.geometry[k].map(q.points[iq]));
          for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) local[i][j] += w * l[i] * l[j];
        }
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j)
            if (dofs[i] != kNoDof && dofs[j] != kNoDof) t.push_back({dofs[i], dofs[j], local[i][j]});
      }
      break;
    }
  }
  return SparseMatrix::from_triplets(n, n, t);
}

SparseMatrix assemble_nonlinear_mass(const MaterialParams& p, const Discretization& d,
                                     std::span<const double> e_cell) {
  std::vector<Triplet> t;
  t.reserve(9 * d.num_tets());
  for (std::size_t k = 0; k < d.num_tets(); ++k) {
    const Mat3 block = d.volume(k) * eps_matrix(p, eval_cell_field(e_cell, k));
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) t.push_back({3 * k + r, 3 * k + c, block(r, c)});
  }
  return SparseMatrix::from_triplets(3 * d.num_tets(), 3 * d.num_tets(), t);
}

SparseMatrix assemble_nonlinear_mass_quadrature(const MaterialParams& p, const Discretization& d,
                                                std::span<const double> e_cell) {
  const QuadratureRule& q = tet_rule();
  std::vector<Triplet> t;
  t.reserve(9 * d.num_tets());
  for (std::size_t k = 0; k < d.num_tets(); ++k) {
    Mat3 block;
    for (std::size_t iq = 0; iq < q.points.size(); ++iq)
      block += (q.weights[iq] * d.geometry[k].det) * eps_matrix(p, eval_cell_field(e_cell, k));
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) t.push_back({3 * k + r, 3 * k + c, block(r, c)});
  }
  return SparseMatrix::from_triplets(3 * d.num_tets(), 3 * d.num_tets(), t);
}

std::vector<Mat3> nonlinear_mass_inverse_blocks(const MaterialParams& p, const Discretization& d,
                                                std::span<const double> e_cell) {
  std::vector<Mat3> blocks(d.num_tets());
  for (std::size_t k = 0; k < d.num_tets(); ++k)
    blocks[k] = (1.0 / (p.eps0 * d.volume(k))) * cm_matrix(p, eval_cell_field(e_cell, k));
  return blocks;
}

SparseMatrix assemble_edge_nonlinear_mass(const MaterialParams& p, const Discretization& d,
                                          std::span<const double> e_edges) {
  const QuadratureRule& q = tet_rule();
  std::vector<Triplet> t;
  t.reserve(36 * d.num_tets());
  for (std::size_t k = 0; k < d.num_tets(); ++k) {
    const auto& edges = d.topo.tet_edges[k];
    double local[6][6] = {};
    for (std::size_t iq = 0; iq < q.points.size(); ++iq) {
      const EdgeBasis b = edge_basis_at(d, k, q.points[iq]);
      Vec3 e;
      for (int j = 0; j < 6; ++j) e += e_edges[edges[j]] * b.values[j];
      const Mat3 eps = eps_matrix(p, e);
      const double w = q.weights[iq] * d.geometry[k].det;
      for (int j = 0; j < 6; ++j) {
        const Vec3 epsj = eps * b.values[j];
        for (int i = 0; i < 6; ++i) local[i][j] += w * dot(b.values[i], epsj);
      }
    }
    for (int i = 0; i < 6; ++i) {
      const std::size_t r = d.free_edge_index[edges[i]];
      if (r == kNoDof) continue;
      for (int j = 0; j < 6; ++j) {
        const std::size_t c = d.free_edge_index[edges[j]];
        if (c != kNoDof) t.push_back({r, c, local[i][j]});
      }
    }
  }
  return SparseMatrix::from_triplets(d.free_edges.size(), d.free_edges.size(), t);
}

Vector assemble_edge_flux(const MaterialParams& p, const Discretization& d,
                          std::span<const double> e_edges) {
  const QuadratureRule& q = tet_rule();
  Vector g(d.free_edges.size(), 0.0);
  for (std::size_t k = 0; k < d.num_tets(); ++k) {
    const auto& edges = d.topo.tet_edges[k];
    for (std::size_t iq = 0; iq < q.points.size(); ++iq) {
      const EdgeBasis b = edge_basis_at(d, k, q.points[iq]);
      Vec3 e;
      for (int j = 0; j < 6; ++j) e += e_edges[edges[j]] * b.values[j];
      const Vec3 flux = (q.weights[iq] * d.geometry[k].det) * d_of_e(p, e);
      for (int i = 0; i < 6; ++i) {
        const std::size_t r = d.free_edge_index[edges[i]];
        if (r != kNoDof) g[r] += dot(flux, b.values[i]);
      }
    }
  }
  return g;
}

SparseMatrix assemble_coupling(const Discretization& d, Formulation f) {
  std::vector<Triplet> t;
  if (f == Formulation::LeeMadsen) {
    t.reserve(18 * d.num_tets());
    for (std::size_t k = 0; k < d.num_tets(); ++k) {
      const EdgeBasis b = edge_basis_at(d, k, {0.25, 0.25, 0.25});
      const double vol = d.volume(k);
      for (int j = 0; j < 6; ++j)
        for (std::size_t c = 0; c < 3; ++c)
          t.push_back({3 * k + c, d.topo.tet_edges[k][j], vol * b.curls[j][static_cast<int>(c)]});
    }
    return SparseMatrix::from_triplets(3 * d.num_tets(), d.topo.num_edges(), t);
  }

  const QuadratureRule& q = tet_rule();
  t.reserve(24 * d.num_tets());
  for (std::size_t k = 0; k < d.num_tets(); ++k) {
    const EdgeBasis eb = edge_basis_at(d, k, {0.25, 0.25, 0.25});
    double local[4][6] = {};
    for (std::size_t iq = 0; iq < q.points.size(); ++iq) {
      const FaceBasis fb = face_basis_at(d, k, q.points[iq]);
      const double w = q.weights[iq] * d.geometry[k].det;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 6; ++j) local[i][j] += w * dot(fb.values[i], eb.curls[j]);
    }
    for (int j = 0; j < 6; ++j) {
      const std::size_t c = d.free_edge_index[d.topo.tet_edges[k][j]];
      if (c == kNoDof) continue;
      for (int i = 0; i < 4; ++i) t.push_back({d.topo.tet_faces[k][i], c, local[i][j]});
    }
  }
  return SparseMatrix::from_triplets(d.topo.num_faces(), d.free_edges.size(), t);
}

SparseMatrix assemble_curl_curl(const Discretization& d, SpaceKind kind) {
  if (kind != SpaceKind::NedelecEdge && kind != SpaceKind::NedelecEdgeBC)
    throw InvalidArgument("curl-curl form needs an edge-element space");
  std::vector<Triplet> t;
  t.reserve(36 * d.num_tets());
  for (std::size_t k = 0; k < d.num_tets(); ++k) {
    const EdgeBasis b = edge_basis_at(d, k, {0.25, 0.25, 0.25});
    const double vol = d.volume(k);
    for (int i = 0; i < 6; ++i) {
      const std::size_t r = edge_row(d, kind, d.topo.tet_edges[k][i]);
      if (r == kNoDof) continue;
      for (int j = 0; j < 6; ++j) {
        const std::size_t c = edge_row(d, kind, d.topo.tet_edges[k][j]);
        if (c != kNoDof) t.push_back({r, c, vol * dot(b.curls[i], b.curls[j])});
      }
    }
  }
  const std::size_t n = edge_space_size(d, kind);
  return SparseMatrix::from_triplets(n, n, t);
}

SparseMatrix assemble_gradient_constraint(const Discretization& d) {
  const QuadratureRule& q = tet_rule();
  std::vector<Triplet> t;
  t.reserve(24 * d.num_tets());
  for (std::size_t k = 0; k < d.num_tets(); ++k) {
    const auto grads = barycentric_gradients(d.geometry[k]);
    const auto vdofs = d.vertex.dofs(k);
    double local[4][6] = {};
    for (std::size_t iq = 0; iq < q.points.size(); ++iq) {
      const EdgeBasis b = edge_basis_at(d, k, q.points[iq]);
      const double w = q.weights[iq] * d.geometry[k].det;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 6; ++j) local[i][j] += w * dot(grads[i], b.values[j]);
    }
    for (int i = 0; i < 4; ++i) {
      if (vdofs[i] == kNoDof) continue;
      for (int j = 0; j < 6; ++j) t.push_back({vdofs[i], d.topo.tet_edges[k][j], local[i][j]});
    }
  }
  return SparseMatrix::from_triplets(d.vertex.num_dofs, d.topo.num_edges(), t);
}

SparseMatrix discrete_curl(const Discretization& d) {
  std::vector<Triplet> t;
  t.reserve(3 * d.topo.num_faces());
  for (std::size_t f = 0; f < d.topo.num_faces(); ++f) {
    const auto [a, b, c] = d.topo.faces[f];
    // Circulation a -> b -> c -> a; edges run lo -> hi.
    t.push_back({f, edge_index(d.topo, a, b), 1.0});
    t.push_back({f, edge_index(d.topo, b, c), 1.0});
    t.push_back({f, edge_index(d.topo, a, c), -1.0});
  }
  return SparseMatrix::from_triplets(d.topo.num_faces(), d.topo.num_edges(), t);
}

SparseMatrix discrete_gradient(const Discretization& d) {
  std::vector<Triplet> t;
  t.reserve(2 * d.topo.num_edges());
  for (std::size_t e = 0; e < d.topo.num_edges(); ++e) {
    t.push_back({e, d.topo.edges[e][0], -1.0});
    t.push_back({e, d.topo.edges[e][1], 1.0});
  }
  return SparseMatrix::from_triplets(d.topo.num_edges(), d.topo.num_vertices(), t);
}

Vector assemble_source(const Discretization& d, SpaceKind kind, const VectorField& f) {
  const QuadratureRule& q = tet_rule();
  switch (kind) {
    case SpaceKind::NedelecEdge:
    case SpaceKind::NedelecEdgeBC: {
      Vector out(edge_space_size(d, kind), 0.0);
      for (std::size_t k = 0; k < d.num_tets(); ++k)
        for (std::size_t iq = 0; iq < q.points.size(); ++iq) {
          const EdgeBasis b = edge_basis_at(d, k, q.points[iq]);
          const Vec3 fv = (q.weights[iq] * d.geometry[k].det) * f(d.geometry[k].map(q.points[iq]));
          for (int i = 0; i < 6; ++i) {
            const std::size_t r = edge_row(d, kind, d.topo.tet_edges[k][i]);
            if (r != kNoDof) out[r] += dot(fv, b.values[i]);
          }
        }
      return out;
    }
    case SpaceKind::RaviartThomasFace: {
      Vector out(d.topo.num_faces(), 0.0);
      for (std::size_t k = 0; k < d.num_tets(); ++k)
        for (std::size_t iq = 0; iq < q.points.size(); ++iq) {
          const FaceBasis b = face_basis_at(d, k, q.points[iq]);
          const Vec3 fv = (q.weights[iq] * d.geometry[k].det) * f(d.geometry[k].map(q.points[iq]));
          for (int i = 0; i < 4; ++i) out[d.topo.tet_faces[k][i]] += dot(fv, b.values[i]);
        }
      return out;
    }
    case SpaceKind::DiscontinuousVector: {
      Vector out(3 * d.num_tets(), 0.0);
      for (std::size_t k = 0; k < d.num_tets(); ++k) {
        Vec3 s;
        for (std::size_t iq = 0; iq < q.points.size(); ++iq)
          s += (q.weights[iq] * d.geometry[k].det) * f(d.geometry[k].map(q.points[iq]));
        out[3 * k] = s.x;
        out[3 * k + 1] = s.y;
        out[3 * k + 2] = s.z;
      }
      return out;
    }
    case SpaceKind::LagrangeScalar: break;
  }
  throw InvalidArgument(std::string("vector source cannot be tested against ") + to_string(kind));
}

Vector l2_project(const Discretization& d, const VectorField& w) {
  return l2_project(d, [&w](std::size_t, const Vec3& x) { return w(x); });
}

Vector l2_project(const Discretization& d, const CellField& w) {
  const QuadratureRule& q = tet_rule();
  Vector out(3 * d.num_tets(), 0.0);
  for (std::size_t k = 0; k < d.num_tets(); ++k) {
    Vec3 s;
    for (std::size_t iq = 0; iq < q.points.size(); ++iq)
      s += q.weights[iq] * w(k, d.geometry[k].map(q.points[iq]));
    // Weights sum to 1/6 = |K| / det J.
    s *= 6.0;
    out[3 * k] = s.x;
    out[3 * k + 1] = s.y;
    out[3 * k + 2] = s.z;
  }
  return out;
}

Vector curl_project(const Discretization& d, const VectorField& v, const VectorField& curl_v,
                    double rel_tol) {
  const SparseMatrix a = assemble_curl_curl(d, SpaceKind::NedelecEdge);
  const SparseMatrix b = assemble_gradient_constraint(d);
  const QuadratureRule& q = tet_rule();

  Vector f(d.topo.num_edges(), 0.0);
  Vector g(d.vertex.num_dofs, 0.0);
  for (std::size_t k = 0; k < d.num_tets(); ++k) {
    Vec3 curl_int;
    const auto l_grads = barycentric_gradients(d.geometry[k]);
    double grad_int[4] = {};
    for (std::size_t iq = 0; iq < q.points.size(); ++iq) {
      const double w = q.weights[iq] * d.geometry[k].det;
      const Vec3 x = d.geometry[k].map(q.points[iq]);
      curl_int += w * curl_v(x);
      const Vec3 vx = v(x);
      for (int i = 0; i < 4; ++i) grad_int[i] += w * dot(vx, l_grads[i]);
    }
    const EdgeBasis eb = edge_basis_at(d, k, {0.25, 0.25, 0.25});
    for (int j = 0; j < 6; ++j) f[d.topo.tet_edges[k][j]] += dot(eb.curls[j], curl_int);
    const auto vdofs = d.vertex.dofs(k);
    for (int i = 0; i < 4; ++i)
      if (vdofs[i] != kNoDof) g[vdofs[i]] += grad_int[i];
  }
  return solve_saddle(a, b, f, g, rel_tol).u;
}

Vector interpolate_edges(const Discretization& d, const VectorField& v, bool zero_boundary) {
  const QuadratureRule& q = line_rule();
  Vector out(d.topo.num_edges(), 0.0);
  for (std::size_t e = 0; e < d.topo.num_edges(); ++e) {
    if (zero_boundary && d.topo.boundary_edge[e]) continue;
    const Vec3& a = d.mesh.vertices[d.topo.edges[e][0]];
    const Vec3 t = d.mesh.vertices[d.topo.edges[e][1]] - a;
    double s = 0.0;
    for (std::size_t iq = 0; iq < q.points.size(); ++iq)
      s += q.weights[iq] * dot(v(a + q.points[iq].x * t), t);
    out[e] = s;
  }
  return out;
}

Vector interpolate_faces(const Discretization& d, const VectorField& v) {
  const QuadratureRule& q = triangle_rule();
  Vector out(d.topo.num_faces(), 0.0);
  for (std::size_t f = 0; f < d.topo.num_faces(); ++f) {
    const auto [ia, ib, ic] = d.topo.faces[f];
    const Vec3& a = d.mesh.vertices[ia];
    const Vec3 u = d.mesh.vertices[ib] - a;
    const Vec3 w = d.mesh.vertices[ic] - a;
    const Vec3 n = cross(u, w);  // |n| is the area Jacobian
    double s = 0.0;
    for (std::size_t iq = 0; iq < q.points.size(); ++iq)
      s += q.weights[iq] * dot(v(a + q.points[iq].x * u + q.points[iq].y * w), n);
    out[f] = s;
  }
  return out;
}

AssembledForms assemble_forms(const Discretization& d, Formulation f, const MaterialParams& p) {
  p.validate();
  AssembledForms forms;
  forms.formulation = f;
  forms.coupling = assemble_coupling(d, f);
  if (f == Formulation::LeeMadsen) {
    forms.mass_h = assemble_mass(d, SpaceKind::NedelecEdge, p.mu0);
  } else {
    forms.mass_h = assemble_mass(d, SpaceKind::RaviartThomasFace, p.mu0);
    std::vector<std::size_t> rows(d.topo.num_faces());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    forms.curl_incidence =
        discrete_curl(d).submatrix(rows, rows.size(), d.free_edge_index, d.free_edges.size());
    forms.curl_curl = assemble_curl_curl(d, SpaceKind::NedelecEdgeBC);
  }
  return forms;
}

}  // namespace kerrfem
