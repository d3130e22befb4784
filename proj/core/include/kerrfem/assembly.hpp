#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "kerrfem/fem_spaces.hpp"
#include "kerrfem/linalg.hpp"
#include "kerrfem/material.hpp"
#include "kerrfem/mesh.hpp"

namespace kerrfem {

using ScalarField = std::function<double(const Vec3&)>;
using VectorField = std::function<Vec3(const Vec3&)>;
/// Field that may be discontinuous across faces: (tet, physical point) -> value.
using CellField = std::function<Vec3(std::size_t, const Vec3&)>;

/// Which semi-discrete system is solved.
///  LeeMadsen: E in piecewise constants W_h, H in edge elements U_h.
///  Nedelec:   E in edge elements with zero tangential trace U_0h, H in RT0 V_h.
enum class Formulation { LeeMadsen, Nedelec };

const char* to_string(Formulation f);

/// Mesh, topology, per-tet geometry and every dof map, built once.
struct Discretization {
  Mesh mesh;
  Topology topo;
  std::vector<TetGeometry> geometry;
  DofMap edge;     ///< U_h
  DofMap edge_bc;  ///< U_0h (constrained boundary edges)
  DofMap face;     ///< V_h
  DofMap cell;     ///< W_h
  DofMap vertex;   ///< S_h, gauge-pinned
  /// Full edge index -> compact interior-edge index, or kNoDof.
  std::vector<std::size_t> free_edge_index;
  /// Compact interior-edge index -> full edge index.
  std::vector<std::size_t> free_edges;
  double h = 0.0;

  static Discretization build(Mesh mesh, std::size_t gauge_vertex = 0);

  std::size_t num_tets() const { return mesh.tets.size(); }
  double volume(std::size_t tet) const { return geometry[tet].volume(); }
};

/// Physical basis values on one tet with global orientation signs applied.
EdgeBasis edge_basis_at(const Discretization& d, std::size_t tet, const Vec3& ref_point);
FaceBasis face_basis_at(const Discretization& d, std::size_t tet, const Vec3& ref_point);

/// Evaluation of discrete fields. Edge coefficients are over all edges
/// (constrained entries included), face coefficients over all faces, cell
/// coefficients 3 per tet.
Vec3 eval_edge_field(const Discretization& d, std::span<const double> coeffs, std::size_t tet,
                     const Vec3& ref_point);
Vec3 eval_edge_curl(const Discretization& d, std::span<const double> coeffs, std::size_t tet);
Vec3 eval_face_field(const Discretization& d, std::span<const double> coeffs, std::size_t tet,
                     const Vec3& ref_point);
double eval_face_div(const Discretization& d, std::span<const double> coeffs, std::size_t tet);
Vec3 eval_cell_field(std::span<const double> coeffs, std::size_t tet);

/// Weighted Gram matrix of a space. For NedelecEdgeBC the result acts on the
/// free (interior) dofs only; for LagrangeScalar it is the scalar P1 mass.
SparseMatrix assemble_mass(const Discretization& d, SpaceKind kind, const ScalarField& weight);
SparseMatrix assemble_mass(const Discretization& d, SpaceKind kind, double weight = 1.0);

/// W_h block of (eps(E_h) dE/dt, Psi): per tet |K| eps(E_K), closed form.
SparseMatrix assemble_nonlinear_mass(const MaterialParams& p, const Discretization& d,
                                     std::span<const double> e_cell);
/// Same blocks by quadrature; kept to cross-check the closed form.
SparseMatrix assemble_nonlinear_mass_quadrature(const MaterialParams& p, const Discretization& d,
                                                std::span<const double> e_cell);
/// Blockwise inverse of assemble_nonlinear_mass: C_m(E_K) / (eps0 |K|).
std::vector<Mat3> nonlinear_mass_inverse_blocks(const MaterialParams& p, const Discretization& d,
                                                std::span<const double> e_cell);

/// U_0h matrix of (eps(E_h) phi_j, phi_i) on free edges; e_edges is full length.
SparseMatrix assemble_edge_nonlinear_mass(const MaterialParams& p, const Discretization& d,
                                          std::span<const double> e_edges);
/// Free-edge vector (D(E_h), phi_i). Its Jacobian in e is the matrix above.
Vector assemble_edge_flux(const MaterialParams& p, const Discretization& d,
                          std::span<const double> e_edges);

/// LeeMadsen: C[i, j] = (curl phi_j^U, psi_i^W), 3 n_tets x n_edges.
/// Nedelec:   K[i, j] = (phi_i^V, curl psi_j^U0), n_faces x n_free_edges.
SparseMatrix assemble_coupling(const Discretization& d, Formulation f);

/// (curl phi_i, curl phi_j) on U_h (all edges) or U_0h (free edges).
SparseMatrix assemble_curl_curl(const Discretization& d, SpaceKind kind);

/// B[i, j] = (phi_j^U, grad p_i) for p_i in the gauge-pinned P1 space.
SparseMatrix assemble_gradient_constraint(const Discretization& d);

/// Face-edge incidence: RT0 coefficients of curl of a Whitney field.
SparseMatrix discrete_curl(const Discretization& d);
/// Edge-vertex incidence: Whitney coefficients of grad of a P1 field.
SparseMatrix discrete_gradient(const Discretization& d);

/// Load vector (f, basis_i). For NedelecEdgeBC entries are on free edges.
Vector assemble_source(const Discretization& d, SpaceKind kind, const VectorField& f);

/// Cellwise L2 projection onto W_h (P_h).
Vector l2_project(const Discretization& d, const VectorField& w);
Vector l2_project(const Discretization& d, const CellField& w);

/// Curl-preserving projection onto U_h (Pi_h): matches (curl u, curl psi) for
/// all psi in U_h and (u, grad p) for all p in S_h.
Vector curl_project(const Discretization& d, const VectorField& v, const VectorField& curl_v,
                    double rel_tol = 1e-10);

/// Canonical interpolants: edge circulations / face fluxes. For
/// NedelecEdgeBC the boundary entries are zeroed (full-length result).
Vector interpolate_edges(const Discretization& d, const VectorField& v, bool zero_boundary = false);
Vector interpolate_faces(const Discretization& d, const VectorField& v);

/// Matrices the time integrators need for one formulation.
struct AssembledForms {
  Formulation formulation = Formulation::LeeMadsen;
  /// mu0-weighted mass of the H space (U_h or V_h).
  SparseMatrix mass_h;
  /// C (LeeMadsen) or K (Nedelec).
  SparseMatrix coupling;
  /// Nedelec only: face-edge incidence restricted to free edges.
  SparseMatrix curl_incidence;
  /// Nedelec only: curl-curl stiffness on free edges.
  SparseMatrix curl_curl;
};

AssembledForms assemble_forms(const Discretization& d, Formulation f, const MaterialParams& p);

}  // namespace kerrfem
