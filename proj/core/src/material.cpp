#include "kerrfem/material.hpp"

#include <cmath>
#include <string>

#include "kerrfem/error.hpp"

namespace kerrfem {

void MaterialParams::validate() const {
  if (!(eps0 > 0.0)) throw InvalidArgument("eps0 must be > 0 (got " + std::to_string(eps0) + ")");
  if (!(mu0 > 0.0)) throw InvalidArgument("mu0 must be > 0 (got " + std::to_string(mu0) + ")");
  if (!(chi1 >= 0.0))
    throw InvalidArgument("chi1 must be >= 0 (got " + std::to_string(chi1) +
                          "); nonnegative susceptibilities keep eps(E) positive definite");
  if (!(chi3 >= 0.0))
    throw InvalidArgument("chi3 must be >= 0 (got " + std::to_string(chi3) +
                          "); nonnegative susceptibilities keep eps(E) positive definite");
}

Mat3 eps_matrix(const MaterialParams& p, const Vec3& e) {
  const double eps_s = 1.0 + p.chi1 + p.chi3 * norm2(e);
  Mat3 m = Mat3::outer(e, e);
  m *= 2.0 * p.chi3;
  m(0, 0) += eps_s;
  m(1, 1) += eps_s;
  m(2, 2) += eps_s;
  m *= p.eps0;
  return m;
}

Mat3 cm_matrix(const MaterialParams& p, const Vec3& e) {
  const double e2 = norm2(e);
  const double eps_s = 1.0 + p.chi1 + p.chi3 * e2;
  const double denom = 1.0 + p.chi1 + 3.0 * p.chi3 * e2;
  Mat3 m = Mat3::outer(e, e);
  m *= -2.0 * p.chi3 / denom;
  m(0, 0) += 1.0;
  m(1, 1) += 1.0;
  m(2, 2) += 1.0;
  m *= 1.0 / eps_s;
  return m;
}

Vec3 d_of_e(const MaterialParams& p, const Vec3& e) {
  return (p.eps0 * (1.0 + p.chi1 + p.chi3 * norm2(e))) * e;
}

Vec3 e_of_d(const MaterialParams& p, const Vec3& d) {
  const double target = norm(d);
  if (target == 0.0) return {};
  const double a = p.eps0 * p.chi3;
  const double b = p.eps0 * (1.0 + p.chi1);
  if (a == 0.0) return (1.0 / b) * d;

  // f(s) = a s^3 + b s - |D| is increasing, f(0) < 0 <= f(|D|/b).
  double lo = 0.0;
  double hi = target / b;
  double s = hi;
  for (int it = 0; it < 100; ++it) {
    const double f = (a * s * s + b) * s - target;
    if (std::abs(f) <= 1e-15 * target) return (s / target) * d;
    if (f > 0) hi = s;
    else lo = s;
    const double df = 3.0 * a * s * s + b;
    double next = s - f / df;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - s) <= 1e-14 * s) return (next / target) * d;
    s = next;
  }
  throw SolverError(SolverError::Kind::NotConverged, std::abs((a * s * s + b) * s - target),
                    "constitutive inversion E(D) did not converge in 100 iterations");
}

double electric_energy_density(const MaterialParams& p, const Vec3& e) {
  const double e2 = norm2(e);
  return 0.5 * p.eps0 * (1.0 + p.chi1) * e2 + 0.75 * p.eps0 * p.chi3 * e2 * e2;
}

double energy_density(const MaterialParams& p, const Vec3& e, const Vec3& h) {
  return electric_energy_density(p, e) + 0.5 * p.mu0 * norm2(h);
}

}  // namespace kerrfem
