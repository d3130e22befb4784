#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

#include "kerrfem/assembly.hpp"
#include "kerrfem/linalg.hpp"
#include "kerrfem/material.hpp"

namespace kerrfem {

using TimeVectorField = std::function<Vec3(double, const Vec3&)>;

/// Semi-discrete state. LeeMadsen: e has 3 entries per tet, h one per edge.
/// Nedelec: e has one entry per edge (boundary edges stay exactly zero), h
/// one per face.
struct State {
  Formulation formulation = Formulation::LeeMadsen;
  Vector e;
  Vector h;
  double t = 0.0;
};

/// Electric and magnetic current densities. An empty function means zero.
struct Sources {
  TimeVectorField electric;
  TimeVectorField magnetic;

  bool empty() const { return !electric && !magnetic; }
};

struct SolverOptions {
  double cg_tol = 1e-11;
  /// Relative residual of the implicit-midpoint nonlinear system.
  double nonlinear_tol = 1e-11;
  int max_nonlinear_iterations = 50;
};

struct Derivative {
  Vector de;
  Vector dh;
};

/// One semi-discrete Maxwell system (formulation + material + sources) on a
/// fixed discretization. The discretization must outlive the system.
class MaxwellSystem {
 public:
  MaxwellSystem(const Discretization& disc, Formulation formulation, MaterialParams params,
                Sources sources = {}, SolverOptions options = {});

  const Discretization& discretization() const { return disc_; }
  const AssembledForms& forms() const { return forms_; }
  const MaterialParams& params() const { return params_; }
  const Sources& sources() const { return sources_; }
  const SolverOptions& options() const { return options_; }
  Formulation formulation() const { return forms_.formulation; }

  /// LeeMadsen: (P_h E0, Pi_h H0); Nedelec: (edge interpolant of E0 with
  /// zero boundary circulations, face-flux interpolant of H0). `curl_h0` is
  /// only used by LeeMadsen and may be empty when H0 is identically zero.
  State initialize(const VectorField& e0, const VectorField& h0,
                   const VectorField& curl_h0 = {}, double t0 = 0.0) const;

  State zero_state(double t0 = 0.0) const;

  /// Time derivatives of the semi-discrete ODE at state.t.
  Derivative rhs(const State& state) const;

  /// Implicit midpoint on the flux form. Throws SolverError if the Newton
  /// iteration stalls (a smaller dt usually helps).
  State step_midpoint(const State& state, double dt) const;

  /// Classical explicit RK4; stable for roughly dt <= 0.5 h sqrt(eps0 mu0).
  State step_rk4(const State& state, double dt) const;

  /// W = 1/2 ||E||^2_{eps0(1+chi1)} + 3/4 ||E||^4_{L4, eps0 chi3} + 1/2 ||H||^2_{mu0}.
  double total_energy(const State& state) const;

  /// Load vectors (J_e(t), psi_i) and (J_m(t), phi_i) for the E and H spaces.
  /// The E load lives on free edges for Nedelec.
  Vector electric_load(double t) const;
  Vector magnetic_load(double t) const;

  /// (J_e, E_h) + (J_m, H_h) at time t for the given coefficient vectors.
  double source_power(double t, const Vector& e, const Vector& h) const;

  /// ||J_e(t)||^2 weighted by 1/(eps0 (1+chi1)) plus ||J_m(t)||^2 weighted by 1/mu0.
  double source_norm_sq(double t) const;

  /// Largest pointwise |E_h| over the mesh.
  double max_abs_e(const State& state) const;

  /// Nedelec only: largest cellwise |div H_h|.
  double max_cell_divergence(const State& state) const;

 private:
  Vector lm_flux_update(const Vector& y, double dt, const Vector& fe,
                        const std::vector<Vec3>& d_old) const;
  State midpoint_lee_madsen(const State& s, double dt) const;
  State midpoint_nedelec(const State& s, double dt) const;

  const Discretization& disc_;
  MaterialParams params_;
  Sources sources_;
  SolverOptions options_;
  AssembledForms forms_;
  /// Signed physical curls of the six edge functions per tet.
  std::vector<std::array<Vec3, 6>> tet_curls_;
};

/// Samples of a run on a uniform grid t_0 < t_1 < ... .
struct EnergyTrace {
  std::vector<double> times;
  std::vector<double> energy;
  /// Per step n -> n+1: midpoint source power (J_e, E) + (J_m, H).
  std::vector<double> source_power;
  /// Cumulative source work int_0^t_n of the source power.
  std::vector<double> source_work;
  /// Cumulative int_0^t_n of source_norm_sq.
  std::vector<double> source_norm_integral;
  std::vector<double> max_abs_e;
};

struct ResidualReport {
  std::vector<double> residuals;
  double max_abs = 0.0;
};

/// r_n = (W_{n+1} - W_n)/dt + (J_e, E) + (J_m, H) at the step midpoint.
ResidualReport energy_law_residual(const EnergyTrace& trace);

struct BoundReport {
  /// W(t_n) / [2 W(0) + t_n int_0^t_n (||J_e||^2 + ||J_m||^2) ds].
  std::vector<double> ratios;
  double max_ratio = 0.0;
  std::size_t violations = 0;
};

BoundReport stability_bound_check(const EnergyTrace& trace);

enum class Stepper { Midpoint, Rk4 };

struct RunOptions {
  double t_end = 1.0;
  /// Upper bound on the step; the actual step is t_end / ceil(t_end / dt).
  double dt = 1e-2;
  Stepper stepper = Stepper::Midpoint;
  /// Skip the source-norm quadrature for the bound monitor.
  bool track_source_norm = true;
  std::function<void(const State&, std::size_t step)> observer;
};

struct RunResult {
  State final_state;
  EnergyTrace trace;
  double dt = 0.0;
  std::size_t steps = 0;
};

RunResult simulate(const MaxwellSystem& system, State initial, const RunOptions& options);

}  // namespace kerrfem
