#include "kerrfem/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "kerrfem/error.hpp"
#include "kerrfem/quadrature.hpp"

namespace kerrfem {

namespace {

const Vec3 kCentroid{0.25, 0.25, 0.25};

Vector average(const Vector& a, const Vector& b) {
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = 0.5 * (a[i] + b[i]);
  return out;
}

SparseMatrix sum(const SparseMatrix& a, const SparseMatrix& b, double b_scale) {
  std::vector<Triplet> t;
  t.reserve(a.nonzeros() + b.nonzeros());
  a.append_triplets(t);
  b.append_triplets(t, b_scale);
  return SparseMatrix::from_triplets(a.rows(), a.cols(), t);
}

[[noreturn]] void newton_failure(double residual, int iterations, double dt) {
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "implicit midpoint did not converge in %d iterations (relative residual %.3e, "
                "dt = %.3e); try a smaller time step",
                iterations, residual, dt);
  throw SolverError(SolverError::Kind::NotConverged, residual, buf);
}

}  // namespace

MaxwellSystem::MaxwellSystem(const Discretization& disc, Formulation formulation,
                             MaterialParams params, Sources sources, SolverOptions options)
    : disc_(disc),
      params_(params),
      sources_(std::move(sources)),
      options_(options),
      forms_(assemble_forms(disc, formulation, params)) {
  if (!(options_.cg_tol > 0.0) || !(options_.nonlinear_tol > 0.0) ||
      options_.max_nonlinear_iterations < 1)
    throw InvalidArgument("solver tolerances must be positive and the iteration cap at least 1");
  tet_curls_.resize(disc_.num_tets());
  for (std::size_t k = 0; k < disc_.num_tets(); ++k)
    tet_curls_[k] = edge_basis_at(disc_, k, kCentroid).curls;
}

State MaxwellSystem::zero_state(double t0) const {
  State s;
  s.formulation = formulation();
  s.t = t0;
  if (formulation() == Formulation::LeeMadsen) {
    s.e.assign(3 * disc_.num_tets(), 0.0);
    s.h.assign(disc_.topo.num_edges(), 0.0);
  } else {
    s.e.assign(disc_.topo.num_edges(), 0.0);
    s.h.assign(disc_.topo.num_faces(), 0.0);
  }
  return s;
}

State MaxwellSystem::initialize(const VectorField& e0, const VectorField& h0,
                                const VectorField& curl_h0, double t0) const {
  State s = zero_state(t0);
  if (formulation() == Formulation::LeeMadsen) {
    if (e0) s.e = l2_project(disc_, e0);
    if (h0) {
      if (!curl_h0) throw InvalidArgument("the curl-preserving projection needs curl H0");
      s.h = curl_project(disc_, h0, curl_h0);
    }
  } else {
    if (e0) s.e = interpolate_edges(disc_, e0, true);
    if (h0) s.h = interpolate_faces(disc_, h0);
  }
  return s;
}

Vector MaxwellSystem::electric_load(double t) const {
  const bool lm = formulation() == Formulation::LeeMadsen;
  if (!sources_.electric)
    return Vector(lm ? 3 * disc_.num_tets() : disc_.free_edges.size(), 0.0);
  const auto& je = sources_.electric;
  return assemble_source(disc_, lm ? SpaceKind::DiscontinuousVector : SpaceKind::NedelecEdgeBC,
                         [&je, t](const Vec3& x) { return je(t, x); });
}

Vector MaxwellSystem::magnetic_load(double t) const {
  const bool lm = formulation() == Formulation::LeeMadsen;
  if (!sources_.magnetic) return Vector(lm ? disc_.topo.num_edges() : disc_.topo.num_faces(), 0.0);
  const auto& jm = sources_.magnetic;
  return assemble_source(disc_, lm ? SpaceKind::NedelecEdge : SpaceKind::RaviartThomasFace,
                         [&jm, t](const Vec3& x) { return jm(t, x); });
}

double MaxwellSystem::source_power(double t, const Vector& e, const Vector& h) const {
  if (sources_.empty()) return 0.0;
  double p = 0.0;
  if (sources_.electric) {
    const Vector fe = electric_load(t);
    if (formulation() == Formulation::LeeMadsen)
      p += dot(fe, e);
    else
      p += dot(fe, restrict_vector(e, disc_.free_edge_index, disc_.free_edges.size()));
  }
  if (sources_.magnetic) p += dot(magnetic_load(t), h);
  return p;
}

double MaxwellSystem::source_norm_sq(double t) const {
  if (sources_.empty()) return 0.0;
  const QuadratureRule& q = tet_rule();
  const double we = 1.0 / params_.linear_permittivity();
  const double wm = 1.0 / params_.mu0;
  double s = 0.0;
  for (std::size_t k = 0; k < disc_.num_tets(); ++k)
    for (std::size_t iq = 0; iq < q.points.size(); ++iq) {
      const Vec3 x = disc_.geometry[k].map(q.points[iq]);
      double v = 0.0;
      if (sources_.electric) v += we * norm2(sources_.electric(t, x));
      if (sources_.magnetic) v += wm * norm2(sources_.magnetic(t, x));
      s += q.weights[iq] * disc_.geometry[k].det * v;
    }
  return s;
}

Derivative MaxwellSystem::rhs(const State& s) const {
  Derivative d;
  const Vector fe = electric_load(s.t);
  const Vector fm = magnetic_load(s.t);
  if (formulation() == Formulation::LeeMadsen) {
    // |K| eps(E_K) dE_K/dt = (C h)_K - f_e,K
    Vector r = forms_.coupling * s.h;
    axpy(-1.0, fe, r);
    const auto inv = nonlinear_mass_inverse_blocks(params_, disc_, s.e);
    d.de.resize(s.e.size());
    for (std::size_t k = 0; k < disc_.num_tets(); ++k) {
      const Vec3 v = inv[k] * eval_cell_field(r, k);
      d.de[3 * k] = v.x;
      d.de[3 * k + 1] = v.y;
      d.de[3 * k + 2] = v.z;
    }
    Vector rh = forms_.coupling.multiply_transpose(s.e);
    axpy(1.0, fm, rh);
    for (double& v : rh) v = -v;
    d.dh = cg_solve(forms_.mass_h, rh, options_.cg_tol).x;
  } else {
    Vector r = forms_.coupling.multiply_transpose(s.h);
    axpy(-1.0, fe, r);
    const SparseMatrix m = assemble_edge_nonlinear_mass(params_, disc_, s.e);
    d.de = extend_vector(cg_solve(m, r, options_.cg_tol).x, disc_.free_edge_index);
    // K = M_V G, so (mu0 M_V)^-1 K e = G e / mu0.
    const Vector e_free = restrict_vector(s.e, disc_.free_edge_index, disc_.free_edges.size());
    d.dh = forms_.curl_incidence * e_free;
    for (double& v : d.dh) v *= -1.0 / params_.mu0;
    if (sources_.magnetic) axpy(-1.0, cg_solve(forms_.mass_h, fm, options_.cg_tol).x, d.dh);
  }
  return d;
}

State MaxwellSystem::step_rk4(const State& s, double dt) const {
  if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
  if (s.formulation != formulation()) throw InvalidArgument("state belongs to another formulation");
  auto stage = [&](const Derivative& k, double a) {
    State out = s;
    out.t = s.t + a * dt;
    axpy(a * dt, k.de, out.e);
    axpy(a * dt, k.dh, out.h);
    return out;
  };
  const Derivative k1 = rhs(s);
  const Derivative k2 = rhs(stage(k1, 0.5));
  const Derivative k3 = rhs(stage(k2, 0.5));
  const Derivative k4 = rhs(stage(k3, 1.0));
  State out = s;
  out.t = s.t + dt;
  for (std::size_t i = 0; i < out.e.size(); ++i)
    out.e[i] += dt / 6.0 * (k1.de[i] + 2.0 * k2.de[i] + 2.0 * k3.de[i] + k4.de[i]);
  for (std::size_t i = 0; i < out.h.size(); ++i)
    out.h[i] += dt / 6.0 * (k1.dh[i] + 2.0 * k2.dh[i] + 2.0 * k3.dh[i] + k4.dh[i]);
  return out;
}

State MaxwellSystem::step_midpoint(const State& s, double dt) const {
  if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
  if (s.formulation != formulation()) throw InvalidArgument("state belongs to another formulation");
  return formulation() == Formulation::LeeMadsen ? midpoint_lee_madsen(s, dt)
                                                 : midpoint_nedelec(s, dt);
}

// e^{n+1}_K = E(D(e^n_K) + dt/|K| ((C y)_K - f_e,K)) for a trial midpoint field y.
Vector MaxwellSystem::lm_flux_update(const Vector& y, double dt, const Vector& fe,
                                     const std::vector<Vec3>& d_old) const {
  const Vector cy = forms_.coupling * y;
  Vector e(3 * disc_.num_tets());
  for (std::size_t k = 0; k < disc_.num_tets(); ++k) {
    const double a = dt / disc_.volume(k);
    const Vec3 dk{d_old[k].x + a * (cy[3 * k] - fe[3 * k]),
                  d_old[k].y + a * (cy[3 * k + 1] - fe[3 * k + 1]),
                  d_old[k].z + a * (cy[3 * k + 2] - fe[3 * k + 2])};
    const Vec3 ek = e_of_d(params_, dk);
    e[3 * k] = ek.x;
    e[3 * k + 1] = ek.y;
    e[3 * k + 2] = ek.z;
  }
  return e;
}

State MaxwellSystem::midpoint_lee_madsen(const State& s, double dt) const {
  const double tm = s.t + 0.5 * dt;
  const Vector fe = electric_load(tm);
  const Vector fm = magnetic_load(tm);
  const SparseMatrix& m = forms_.mass_h;
  const SparseMatrix& c = forms_.coupling;

  std::vector<Vec3> d_old(disc_.num_tets());
  for (std::size_t k = 0; k < disc_.num_tets(); ++k)
    d_old[k] = d_of_e(params_, eval_cell_field(s.e, k));

  // F(y) = M y + dt/4 C^T e1(y) - b, with y the midpoint H.
  const Vector mh = m * s.h;
  const Vector cte = c.multiply_transpose(s.e);
  Vector b = mh;
  axpy(-0.25 * dt, cte, b);
  axpy(-0.5 * dt, fm, b);

  Vector y = s.h;
  Vector e1 = lm_flux_update(y, dt, fe, d_old);
  const double scale = std::max({norm(mh), 0.25 * dt * norm(cte), 0.5 * dt * norm(fm),
                                 0.25 * dt * norm(c.multiply_transpose(e1))});
  auto residual = [&](const Vector& yy, const Vector& ee) {
    Vector f = m * yy;
    axpy(0.25 * dt, c.multiply_transpose(ee), f);
    axpy(-1.0, b, f);
    return f;
  };

  State out = s;
  out.t = s.t + dt;
  if (scale == 0.0) return out;

  Vector f = residual(y, e1);
  double rel = norm(f) / scale;
  int it = 0;
  const double w = 0.25 * dt * dt / params_.eps0;
  while (rel > options_.nonlinear_tol) {
    if (it == options_.max_nonlinear_iterations) newton_failure(rel, it, dt);
    ++it;
    // J = M + dt^2/4 sum_K |K| curl^T (C_m(e1_K)/eps0) curl.
    std::vector<Triplet> t;
    t.reserve(m.nonzeros() + 36 * disc_.num_tets());
    m.append_triplets(t);
    for (std::size_t k = 0; k < disc_.num_tets(); ++k) {
      const Mat3 cm = cm_matrix(params_, eval_cell_field(e1, k));
      const auto& curls = tet_curls_[k];
      const auto& edges = disc_.topo.tet_edges[k];
      const double a = w * disc_.volume(k);
      for (int j = 0; j < 6; ++j) {
        const Vec3 cj = cm * curls[j];
        for (int i = 0; i < 6; ++i) t.push_back({edges[i], edges[j], a * dot(curls[i], cj)});
      }
    }
    const SparseMatrix jac = SparseMatrix::from_triplets(m.rows(), m.cols(), t);
    for (double& v : f) v = -v;
    const Vector delta = cg_solve(jac, f, options_.cg_tol).x;
    axpy(1.0, delta, y);
    e1 = lm_flux_update(y, dt, fe, d_old);
    f = residual(y, e1);
    rel = norm(f) / scale;
  }

  out.e = std::move(e1);
  for (std::size_t i = 0; i < y.size(); ++i) out.h[i] = 2.0 * y[i] - s.h[i];
  return out;
}

State MaxwellSystem::midpoint_nedelec(const State& s, double dt) const {
  const double tm = s.t + 0.5 * dt;
  const Vector fe = electric_load(tm);
  const Vector fm = magnetic_load(tm);
  const SparseMatrix& a = forms_.curl_curl;
  const SparseMatrix& g_inc = forms_.curl_incidence;
  const std::size_t nf = disc_.free_edges.size();
  const double beta = 0.25 * dt * dt / params_.mu0;

  const Vector e_old = restrict_vector(s.e, disc_.free_edge_index, nf);
  const Vector g_old = assemble_edge_flux(params_, disc_, s.e);
  const Vector kth = forms_.coupling.multiply_transpose(s.h);
  const Vector ae = a * e_old;
  const Vector gtf = g_inc.multiply_transpose(fm);

  // F(x) = g(x) + beta A x + c.
  Vector c(nf, 0.0);
  axpy(-1.0, g_old, c);
  axpy(-dt, kth, c);
  axpy(beta, ae, c);
  axpy(2.0 * beta, gtf, c);
  axpy(dt, fe, c);
  const double scale = std::max({norm(g_old), dt * norm(kth), beta * norm(ae),
                                 2.0 * beta * norm(gtf), dt * norm(fe)});

  Vector x = e_old;
  Vector x_full = s.e;
  auto residual = [&]() {
    Vector f = assemble_edge_flux(params_, disc_, x_full);
    axpy(beta, a * x, f);
    axpy(1.0, c, f);
    return f;
  };

  State out = s;
  out.t = s.t + dt;
  if (scale == 0.0) return out;

  Vector f = residual();
  double rel = norm(f) / scale;
  int it = 0;
  while (rel > options_.nonlinear_tol) {
    if (it == options_.max_nonlinear_iterations) newton_failure(rel, it, dt);
    ++it;
    const SparseMatrix jac = sum(assemble_edge_nonlinear_mass(params_, disc_, x_full), a, beta);
    for (double& v : f) v = -v;
    axpy(1.0, cg_solve(jac, f, options_.cg_tol).x, x);
    x_full = extend_vector(x, disc_.free_edge_index);
    f = residual();
    rel = norm(f) / scale;
  }

  // h^{n+1} = h^n - dt [G e_mid / mu0 + (mu0 M_V)^-1 f_m]
  const Vector e_mid = average(e_old, x);
  Vector dh = g_inc * e_mid;
  for (double& v : dh) v /= params_.mu0;
  if (sources_.magnetic) axpy(1.0, cg_solve(forms_.mass_h, fm, options_.cg_tol).x, dh);
  axpy(-dt, dh, out.h);
  out.e = std::move(x_full);
  return out;
}

double MaxwellSystem::total_energy(const State& s) const {
  double we = 0.0;
  if (formulation() == Formulation::LeeMadsen) {
    for (std::size_t k = 0; k < disc_.num_tets(); ++k)
      we += disc_.volume(k) * electric_energy_density(params_, eval_cell_field(s.e, k));
  } else {
    const QuadratureRule& q = tet_rule();
    for (std::size_t k = 0; k < disc_.num_tets(); ++k)
      for (std::size_t iq = 0; iq < q.points.size(); ++iq)
        we += q.weights[iq] * disc_.geometry[k].det *
              electric_energy_density(params_, eval_edge_field(disc_, s.e, k, q.points[iq]));
  }
  return we + 0.5 * dot(s.h, forms_.mass_h * s.h);
}

double MaxwellSystem::max_abs_e(const State& s) const {
  double m = 0.0;
  if (formulation() == Formulation::LeeMadsen) {
    for (std::size_t k = 0; k < disc_.num_tets(); ++k)
      m = std::max(m, norm(eval_cell_field(s.e, k)));
    return m;
  }
  // Whitney fields are affine per tet, so |E_h| peaks at a vertex.
  static const std::array<Vec3, 4> corners{Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{0, 1, 0},
                                           Vec3{0, 0, 1}};
  for (std::size_t k = 0; k < disc_.num_tets(); ++k)
    for (const Vec3& p : corners) m = std::max(m, norm(eval_edge_field(disc_, s.e, k, p)));
  return m;
}

double MaxwellSystem::max_cell_divergence(const State& s) const {
  if (formulation() != Formulation::Nedelec)
    throw InvalidArgument("cellwise divergence is only defined for face-element H");
  double m = 0.0;
  for (std::size_t k = 0; k < disc_.num_tets(); ++k)
    m = std::max(m, std::abs(eval_face_div(disc_, s.h, k)));
  return m;
}

ResidualReport energy_law_residual(const EnergyTrace& trace) {
  ResidualReport r;
  const std::size_t n = trace.energy.size();
  if (n < 2) return r;
  r.residuals.resize(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double dt = trace.times[i + 1] - trace.times[i];
    r.residuals[i] = (trace.energy[i + 1] - trace.energy[i]) / dt + trace.source_power[i];
    r.max_abs = std::max(r.max_abs, std::abs(r.residuals[i]));
  }
  return r;
}

BoundReport stability_bound_check(const EnergyTrace& trace) {
  BoundReport r;
  if (trace.energy.empty()) return r;
  const double w0 = trace.energy.front();
  r.ratios.resize(trace.energy.size());
  for (std::size_t i = 0; i < trace.energy.size(); ++i) {
    const double t = trace.times[i] - trace.times.front();
    const double integral =
        trace.source_norm_integral.empty() ? 0.0 : trace.source_norm_integral[i];
    const double bound = 2.0 * w0 + t * integral;
    const double w = trace.energy[i];
    double ratio = 0.0;
    if (bound > 0.0)
      ratio = w / bound;
    else if (w > 0.0)
      ratio = std::numeric_limits<double>::infinity();
    r.ratios[i] = ratio;
    r.max_ratio = std::max(r.max_ratio, ratio);
    if (ratio > 1.0) ++r.violations;
  }
  return r;
}

RunResult simulate(const MaxwellSystem& system, State initial, const RunOptions& options) {
  if (!(options.t_end > 0.0) || !(options.dt > 0.0))
    throw InvalidArgument("t_end and dt must be positive");
  RunResult res;
  res.steps = static_cast<std::size_t>(std::ceil(options.t_end / options.dt - 1e-9));
  res.steps = std::max<std::size_t>(res.steps, 1);
  res.dt = options.t_end / static_cast<double>(res.steps);
  const double dt = res.dt;
  const bool sourced = !system.sources().empty();
  const bool track_norm = sourced && options.track_source_norm;

  EnergyTrace& tr = res.trace;
  const double t0 = initial.t;
  auto record = [&](const State& s) {
    tr.times.push_back(s.t);
    tr.energy.push_back(system.total_energy(s));
    tr.max_abs_e.push_back(system.max_abs_e(s));
  };

  State s = std::move(initial);
  record(s);
  tr.source_work.push_back(0.0);
  tr.source_norm_integral.push_back(0.0);
  if (options.observer) options.observer(s, 0);

  // Two-point Gauss in time for the source-norm integral.
  const double g = 0.5 / std::sqrt(3.0);
  for (std::size_t n = 0; n < res.steps; ++n) {
    State next = options.stepper == Stepper::Midpoint ? system.step_midpoint(s, dt)
                                                      : system.step_rk4(s, dt);
    next.t = t0 + static_cast<double>(n + 1) * dt;
    const double tm = s.t + 0.5 * dt;
    const double power =
        sourced ? system.source_power(tm, average(s.e, next.e), average(s.h, next.h)) : 0.0;
    tr.source_power.push_back(power);
    tr.source_work.push_back(tr.source_work.back() + dt * power);
    double norm_inc = 0.0;
    if (track_norm)
      norm_inc = 0.5 * dt *
                 (system.source_norm_sq(tm - g * dt) + system.source_norm_sq(tm + g * dt));
    tr.source_norm_integral.push_back(tr.source_norm_integral.back() + norm_inc);
    s = std::move(next);
    record(s);
    if (options.observer) options.observer(s, n + 1);
  }
  res.final_state = std::move(s);
  return res;
}

}  // namespace kerrfem
