#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>

#include "kerrfem/dynamics.hpp"
#include "kerrfem/error.hpp"
#include "kerrfem/verification.hpp"
#include "support.hpp"

using namespace kerrfem;

namespace {

constexpr double kPi = std::numbers::pi;

const Formulation kBoth[] = {Formulation::LeeMadsen, Formulation::Nedelec};

Vec3 e_bump(const Vec3& x) { return {0.0, 0.0, std::sin(kPi * x.x) * std::sin(kPi * x.y)}; }

State random_state(const MaxwellSystem& sys, double scale = 1.0) {
  State s = sys.zero_state();
  for (double& v : s.e) v = scale * test::uniform();
  for (double& v : s.h) v = scale * test::uniform();
  if (sys.formulation() == Formulation::Nedelec) {
    const auto& bd = sys.discretization().topo.boundary_edge;
    for (std::size_t i = 0; i < s.e.size(); ++i)
      if (bd[i]) s.e[i] = 0.0;
  }
  return s;
}

State advance(const State& s, const Derivative& d, double tau) {
  State out = s;
  axpy(tau, d.de, out.e);
  axpy(tau, d.dh, out.h);
  return out;
}

double distance(const State& a, const State& b) {
  Vector de = a.e, dh = a.h;
  axpy(-1.0, b.e, de);
  axpy(-1.0, b.h, dh);
  return std::sqrt(dot(de, de) + dot(dh, dh));
}

State run(const MaxwellSystem& sys, const State& s0, double t_end, double dt, Stepper stepper) {
  RunOptions o;
  o.t_end = t_end;
  o.dt = dt;
  o.stepper = stepper;
  return simulate(sys, s0, o).final_state;
}

}  // namespace

TEST_CASE("state layout") {
  const Discretization d = Discretization::build(generate_structured_cube(2));
  const MaxwellSystem lm(d, Formulation::LeeMadsen, {});
  const MaxwellSystem ned(d, Formulation::Nedelec, {});
  CHECK(lm.zero_state().e.size() == 3 * d.num_tets());
  CHECK(lm.zero_state().h.size() == d.topo.num_edges());
  CHECK(ned.zero_state().e.size() == d.topo.num_edges());
  CHECK(ned.zero_state().h.size() == d.topo.num_faces());
  CHECK(lm.total_energy(lm.zero_state()) == 0.0);
  CHECK_THROWS_AS(lm.initialize({}, [](const Vec3&) { return Vec3{1, 0, 0}; }), InvalidArgument);
  CHECK_THROWS_AS(MaxwellSystem(d, Formulation::LeeMadsen, {}, {}, {0.0, 1e-10, 5}), InvalidArgument);
  CHECK_THROWS_AS(MaxwellSystem(d, Formulation::LeeMadsen, {1, 1, 0, -1}), InvalidArgument);
}

TEST_CASE("single-tet energy") {
  // Volume one, eps0 = mu0 = 1, chi1 = 1, chi3 = 2, E = (1,0,0), H = (0,1,0):
  // W = 1/2 * 2 + 3/4 * 2 + 1/2 = 3.
  const Discretization d = Discretization::build(
      make_mesh({Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 6}}, {{0, 1, 2, 3}}));
  const MaxwellSystem sys(d, Formulation::LeeMadsen, {1, 1, 1, 2});
  State s = sys.zero_state();
  s.e = {1, 0, 0};
  s.h = interpolate_edges(d, [](const Vec3&) { return Vec3{0, 1, 0}; });
  CHECK(sys.total_energy(s) == doctest::Approx(3.0).epsilon(1e-13));
}

TEST_CASE("semi-discrete energy is conserved without sources") {
  const Discretization d = Discretization::build(generate_structured_cube(2));
  for (Formulation f : kBoth) {
    for (double chi3 : {0.0, 1.0}) {
      CAPTURE(to_string(f));
      CAPTURE(chi3);
      const MaxwellSystem sys(d, f, {1.3, 0.8, 0.5, chi3});
      const State s = random_state(sys);
      const Derivative der = sys.rhs(s);
      const double tau = 1e-6;
      const double dw = (sys.total_energy(advance(s, der, tau)) - sys.total_energy(advance(s, der, -tau))) / (2 * tau);
      // Scale: the rate of the electric part alone.
      const Derivative e_only{der.de, Vector(der.dh.size(), 0.0)};
      const double de = (sys.total_energy(advance(s, e_only, tau)) - sys.total_energy(advance(s, e_only, -tau))) / (2 * tau);
      CHECK(std::abs(de) > 1e-3);
      CHECK(std::abs(dw) <= 1e-6 * std::abs(de));
    }
  }
}

TEST_CASE("Nedelec boundary circulations stay zero") {
  const Discretization d = Discretization::build(generate_structured_cube(2));
  const MaxwellSystem sys(d, Formulation::Nedelec, {1, 1, 0, 1});
  const State s = run(sys, random_state(sys), 0.1, 0.05, Stepper::Midpoint);
  for (std::size_t i = 0; i < s.e.size(); ++i)
    if (d.topo.boundary_edge[i]) CHECK(s.e[i] == 0.0);
}

TEST_CASE("midpoint conserves the linear energy") {
  const Discretization d = Discretization::build(generate_structured_cube(2));
  const ManufacturedCase c = cavity_mode_case();
  for (Formulation f : kBoth) {
    CAPTURE(to_string(f));
    const MaxwellSystem sys(d, f, c.params);
    const State s0 = sys.initialize([&](const Vec3& x) { return c.e(0, x); }, {}, {});
    RunOptions o;
    o.t_end = 10.0;
    o.dt = 1e-2;
    const RunResult r = simulate(sys, s0, o);
    CHECK(r.steps == 1000);
    const double w0 = r.trace.energy.front();
    double drift = 0.0;
    for (double w : r.trace.energy) drift = std::max(drift, std::abs(w - w0));
    CHECK(drift <= 1e-10 * w0);
    CHECK(energy_law_residual(r.trace).max_abs <= 1e-10 * w0);
  }
}

TEST_CASE("midpoint is second order in time for the Kerr problem") {
  const Discretization d = Discretization::build(generate_structured_cube(2));
  for (Formulation f : kBoth) {
    CAPTURE(to_string(f));
    const MaxwellSystem sys(d, f, {1, 1, 0, 1});
    const State s0 = sys.initialize(e_bump, {}, {});
    const State ref = run(sys, s0, 0.5, 0.05 / 32, Stepper::Midpoint);
    const double e1 = distance(run(sys, s0, 0.5, 0.05, Stepper::Midpoint), ref);
    const double e2 = distance(run(sys, s0, 0.5, 0.025, Stepper::Midpoint), ref);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.12));
  }
}

TEST_CASE("RK4 is fourth order and agrees with midpoint") {
  const Discretization d = Discretization::build(generate_structured_cube(2));
  const MaxwellSystem sys(d, Formulation::LeeMadsen, {1, 1, 0, 1});
  const State s0 = sys.initialize(e_bump, {}, {});
  const State ref = run(sys, s0, 0.5, 0.05 / 16, Stepper::Rk4);
  const double e1 = distance(run(sys, s0, 0.5, 0.05, Stepper::Rk4), ref);
  const double e2 = distance(run(sys, s0, 0.5, 0.025, Stepper::Rk4), ref);
  CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.25));
  const double gap1 = distance(run(sys, s0, 0.5, 0.05, Stepper::Midpoint), ref);
  const double gap2 = distance(run(sys, s0, 0.5, 0.025, Stepper::Midpoint), ref);
  CHECK(gap1 / gap2 == doctest::Approx(4.0).epsilon(0.12));
}

TEST_CASE("RK4 is exact for quartic-in-time curl-free H") {
  // E = 0, H = p(t) a: the curl vanishes, so H' = p'(t) a is driven by J_m alone
  // and RK4 reduces to Simpson's rule, exact for cubic p'.
  const Discretization d = Discretization::build(generate_structured_cube(2));
  const Vec3 a{0.3, -1.2, 0.8};
  auto p = [](double t) { return 1.0 + t - 2.0 * t * t + 0.5 * t * t * t + 0.75 * t * t * t * t; };
  auto dp = [](double t) { return 1.0 - 4.0 * t + 1.5 * t * t + 3.0 * t * t * t; };
  const MaterialParams params{1, 2.0, 0, 1};
  Sources src;
  src.magnetic = [&](double t, const Vec3&) { return -params.mu0 * dp(t) * a; };
  SolverOptions tight;
  tight.cg_tol = 1e-14;
  const MaxwellSystem sys(d, Formulation::LeeMadsen, params, src, tight);
  State s0 = sys.zero_state();
  s0.h = interpolate_edges(d, [&](const Vec3&) { return p(0.0) * a; });
  const State rk = run(sys, s0, 1.0, 0.25, Stepper::Rk4);
  const Vector exact = interpolate_edges(d, [&](const Vec3&) { return p(1.0) * a; });
  Vector diff = rk.h;
  axpy(-1.0, exact, diff);
  CHECK(norm(diff) <= 1e-10 * norm(exact));
  CHECK(norm(rk.e) <= 1e-12);
  Vector mid = run(sys, s0, 1.0, 0.25, Stepper::Midpoint).h;
  axpy(-1.0, exact, mid);
  CHECK(norm(mid) > 1e-4 * norm(exact));
}

TEST_CASE("energy bound") {
  const Discretization d = Discretization::build(generate_structured_cube(2));
  const ManufacturedCase c = kerr_manufactured_case({1, 1, 0, 1});
  SUBCASE("forced from zero data") {
    for (Formulation f : kBoth) {
      const MaxwellSystem sys(d, f, c.params, c.sources());
      RunOptions o;
      o.t_end = 1.0;
      o.dt = 0.05;
      const RunResult r = simulate(sys, sys.zero_state(), o);
      const BoundReport b = stability_bound_check(r.trace);
      CHECK(r.trace.energy.back() > 0.0);
      CHECK(b.violations == 0);
      CHECK(b.max_ratio < 1.0);
    }
  }
  SUBCASE("doubling the current quadruples its norm") {
    Sources one, two;
    one.electric = [](double t, const Vec3& x) { return Vec3{std::cos(t) * x.y, x.z, 1.0}; };
    two.electric = [&](double t, const Vec3& x) { return 2.0 * one.electric(t, x); };
    const MaxwellSystem s1(d, Formulation::LeeMadsen, c.params, one);
    const MaxwellSystem s2(d, Formulation::LeeMadsen, c.params, two);
    CHECK(s2.source_norm_sq(0.3) == doctest::Approx(4.0 * s1.source_norm_sq(0.3)).epsilon(1e-13));
  }
  SUBCASE("hand-made traces") {
    EnergyTrace tr;
    tr.times = {0, 1, 2};
    tr.energy = {1, 2, 5};
    tr.source_norm_integral = {0, 1, 1};
    const BoundReport b = stability_bound_check(tr);
    CHECK(b.ratios[1] == doctest::Approx(2.0 / 3.0));
    CHECK(b.ratios[2] == doctest::Approx(5.0 / 4.0));
    CHECK(b.violations == 1);
  }
}

TEST_CASE("Nedelec keeps the discrete divergence") {
  const Discretization d = Discretization::build(generate_structured_cube(3));
  const MaxwellSystem sys(d, Formulation::Nedelec, {1, 1, 0.5, 1});
  State s0 = sys.initialize(e_bump, {}, {});
  Vector q(d.topo.num_edges());
  for (double& v : q) v = test::uniform();
  s0.h = discrete_curl(d) * q;
  double h_mag = 0.0;
  for (double v : s0.h) h_mag = std::max(h_mag, std::abs(v));
  const double div0 = sys.max_cell_divergence(s0);
  double worst = 0.0;
  RunOptions o;
  o.t_end = 0.5;
  o.dt = 0.025;
  o.observer = [&](const State& s, std::size_t) { worst = std::max(worst, sys.max_cell_divergence(s)); };
  simulate(sys, s0, o);
  CHECK(div0 <= 1e-12 * h_mag);
  CHECK(worst <= 1e-10 * h_mag);
  const MaxwellSystem lm(d, Formulation::LeeMadsen, {});
  CHECK_THROWS_AS(lm.max_cell_divergence(lm.zero_state()), InvalidArgument);
}

TEST_CASE("solver failures and argument checks") {
  const Discretization d = Discretization::build(generate_structured_cube(2));
  SolverOptions one_iteration;
  one_iteration.max_nonlinear_iterations = 1;
  for (Formulation f : kBoth) {
    const MaxwellSystem sys(d, f, {1, 1, 0, 5}, {}, one_iteration);
    const State s0 = sys.initialize(e_bump, {}, {});
    try {
      (void)sys.step_midpoint(s0, 0.1);
      FAIL("expected a SolverError");
    } catch (const SolverError& e) {
      CHECK(e.kind() == SolverError::Kind::NotConverged);
      CHECK(std::string(e.what()).find("smaller time step") != std::string::npos);
    }
    CHECK_THROWS_AS(sys.step_midpoint(s0, 0.0), InvalidArgument);
    CHECK_THROWS_AS(sys.step_rk4(s0, -1.0), InvalidArgument);
    RunOptions o;
    o.dt = -1.0;
    CHECK_THROWS_AS(simulate(sys, s0, o), InvalidArgument);
  }
  const MaxwellSystem lm(d, Formulation::LeeMadsen, {});
  const MaxwellSystem ned(d, Formulation::Nedelec, {});
  CHECK_THROWS_AS(lm.step_midpoint(ned.zero_state(), 0.1), InvalidArgument);
}

TEST_CASE("step count policy") {
  const Discretization d = Discretization::build(generate_structured_cube(1));
  const MaxwellSystem sys(d, Formulation::LeeMadsen, {});
  RunOptions o;
  o.t_end = 1.0;
  o.dt = 0.3;
  const RunResult r = simulate(sys, sys.zero_state(), o);
  CHECK(r.steps == 4);
  CHECK(r.dt == doctest::Approx(0.25));
  CHECK(r.trace.times.back() == doctest::Approx(1.0));
  CHECK(r.trace.energy.size() == 5);
  CHECK(r.trace.source_power.size() == 4);
}
