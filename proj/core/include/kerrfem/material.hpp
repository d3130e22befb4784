#pragma once

#include "kerrfem/vec3.hpp"

namespace kerrfem {

/// Isotropic Kerr medium, P(E) = eps0 (chi1 E + chi3 |E|^2 E), B = mu0 H.
struct MaterialParams {
  double eps0 = 1.0;
  double mu0 = 1.0;
  double chi1 = 0.0;
  double chi3 = 0.0;

  /// Throws InvalidArgument unless eps0, mu0 > 0 and chi1, chi3 >= 0; the
  /// susceptibility bounds are what keeps eps(E) uniformly positive definite.
  void validate() const;

  /// eps0 (1 + chi1): the linear part of the permittivity.
  double linear_permittivity() const { return eps0 * (1.0 + chi1); }
};

/// eps(E) = eps0 [(1 + chi1 + chi3 |E|^2) I + 2 chi3 E E^T].
/// Symmetric with every eigenvalue >= eps0.
Mat3 eps_matrix(const MaterialParams& p, const Vec3& e);

/// C_m(E) = (1/eps_s) [I - eps_m / (1 + chi1 + 3 chi3 |E|^2)], the closed-form
/// (Sherman-Morrison) inverse of eps(E)/eps0, so eps(E)^-1 = C_m(E)/eps0.
Mat3 cm_matrix(const MaterialParams& p, const Vec3& e);

/// D(E) = eps0 (1 + chi1 + chi3 |E|^2) E.
Vec3 d_of_e(const MaterialParams& p, const Vec3& e);

/// Inverse of d_of_e. Solves the increasing cubic
/// eps0 chi3 s^3 + eps0 (1 + chi1) s = |D| for s = |E| by bracketed Newton.
/// Throws SolverError if 100 iterations do not suffice.
Vec3 e_of_d(const MaterialParams& p, const Vec3& d);

/// 1/2 eps0 (1+chi1) |E|^2 + 3/4 eps0 chi3 |E|^4: the electric part of the
/// energy density, whose E-gradient is eps(E) E.
double electric_energy_density(const MaterialParams& p, const Vec3& e);

/// Full density: electric part plus 1/2 mu0 |H|^2.
double energy_density(const MaterialParams& p, const Vec3& e, const Vec3& h);

}  // namespace kerrfem
