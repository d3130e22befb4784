#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "kerrfem/assembly.hpp"
#include "kerrfem/dynamics.hpp"
#include "kerrfem/material.hpp"

namespace kerrfem {

/// Exact fields on the unit cube plus the current densities that make them
/// solve the Kerr-Maxwell system with PEC walls.
struct ManufacturedCase {
  std::string name;
  MaterialParams params;
  double t_end = 1.0;
  TimeVectorField e, h, dt_e, dt_h, curl_e, curl_h;
  /// Sources are identically zero; sources() returns an empty set.
  bool source_free = false;
  /// False when e/h only describe initial data (no exact solution for t > 0).
  bool has_exact = true;
  /// Nedelec H cannot represent the exact field; LeeMadsen only.
  bool lee_madsen_only = false;

  /// J_e = curl H - eps(E) dE/dt.
  Vec3 j_e(double t, const Vec3& x) const;
  /// J_m = -mu0 dH/dt - curl E.
  Vec3 j_m(double t, const Vec3& x) const;
  Sources sources() const;
};

/// E = cos t (sin pi y sin pi z, sin pi x sin pi z, sin pi x sin pi y),
/// H = sin t (sin pi x cos pi y, -cos pi x sin pi y, 0).
ManufacturedCase kerr_manufactured_case(const MaterialParams& params, double t_end = 1.0);

/// Source-free TM mode of the unit cube, omega = sqrt(2) pi, eps0 = mu0 = 1.
ManufacturedCase cavity_mode_case(double t_end = 1.0);

/// E = 0, H = (1 + t) (a + b x x): H lies in the Whitney space for every t and
/// is affine in time, so both steppers of the Lee-Madsen scheme reproduce it
/// up to round-off.
ManufacturedCase reproduction_case(const MaterialParams& params, double t_end = 1.0);

/// Initial data E0 = (0, 0, sin pi x sin pi y), H0 = 0 under any material,
/// no sources and no exact solution.
ManufacturedCase zero_source_case(const MaterialParams& params, double t_end = 1.0);

/// Builds one of the named cases: "cavity", "kerr-manufactured",
/// "reproduction", "custom-zero-source".
ManufacturedCase make_case(const std::string& name, const MaterialParams& params, double t_end);

/// sqrt(int weight |u_h - u|^2) by the degree-5 tet rule. `kind` selects how
/// the full-length coefficients are read: DiscontinuousVector, NedelecEdge /
/// NedelecEdgeBC (all edges), or RaviartThomasFace.
double l2_error(const Discretization& d, SpaceKind kind, std::span<const double> coeffs,
                const VectorField& exact, double weight = 1.0);

struct ErrorNorms {
  double e = 0.0;  ///< ||E_h - E||_{eps0}
  double h = 0.0;  ///< ||H_h - H||_{mu0}
};

ErrorNorms error_norms(const MaxwellSystem& system, const State& state, const TimeVectorField& e,
                       const TimeVectorField& h);

struct EocRow {
  std::size_t n = 0;
  double h = 0.0;
  double err_e = 0.0;
  double err_h = 0.0;
  /// NaN on the first row and where an error is at round-off level.
  double eoc_e = 0.0;
  double eoc_h = 0.0;
};

struct EocTable {
  std::vector<EocRow> rows;
  /// False if some error grew under refinement.
  bool monotone = true;
};

struct ConvergenceOptions {
  Formulation formulation = Formulation::LeeMadsen;
  Stepper stepper = Stepper::Midpoint;
  /// dt = dt_factor * h^2 unless fixed_dt > 0.
  double dt_factor = 0.05;
  double fixed_dt = 0.0;
  /// Errors below this are treated as round-off: the EOC is not applicable.
  double eoc_floor = 1e-9;
  SolverOptions solver;
};

/// Errors at the case's final time on structured meshes n = levels[i].
/// Throws InvalidArgument unless each level doubles the previous one.
EocTable run_convergence(const ManufacturedCase& mcase, const std::vector<std::size_t>& levels,
                         const ConvergenceOptions& options = {});

/// Dynamics-free projection study: ||w - P_h w|| and ||v - Pi_h v|| for a
/// smooth w and a divergence-free v with v.n = 0.
struct ProjectionRow {
  std::size_t n = 0;
  double h = 0.0;
  double err_p = 0.0;
  double err_pi = 0.0;
  double eoc_p = 0.0;
  double eoc_pi = 0.0;
};

std::vector<ProjectionRow> projection_study(const std::vector<std::size_t>& levels);

/// log2(coarse / fine), NaN when either error is below `floor`.
double eoc(double coarse, double fine, double floor = 0.0);

}  // namespace kerrfem
