#include "kerrfem/verification.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include "kerrfem/error.hpp"
#include "kerrfem/quadrature.hpp"

namespace kerrfem {

namespace {

constexpr double kPi = std::numbers::pi;

Vec3 kerr_e_shape(const Vec3& x) {
  const double sx = std::sin(kPi * x.x), sy = std::sin(kPi * x.y), sz = std::sin(kPi * x.z);
  return {sy * sz, sx * sz, sx * sy};
}

Vec3 kerr_curl_e_shape(const Vec3& x) {
  const double sx = std::sin(kPi * x.x), sy = std::sin(kPi * x.y), sz = std::sin(kPi * x.z);
  const double cx = std::cos(kPi * x.x), cy = std::cos(kPi * x.y), cz = std::cos(kPi * x.z);
  return {kPi * sx * (cy - cz), kPi * sy * (cz - cx), kPi * sz * (cx - cy)};
}

// Stream-function field curl(0, 0, sin pi x sin pi y / pi): divergence-free,
// zero normal component on the cube boundary.
Vec3 swirl(const Vec3& x) {
  const double sx = std::sin(kPi * x.x), sy = std::sin(kPi * x.y);
  const double cx = std::cos(kPi * x.x), cy = std::cos(kPi * x.y);
  return {sx * cy, -cx * sy, 0.0};
}

Vec3 curl_swirl(const Vec3& x) {
  return {0.0, 0.0, 2.0 * kPi * std::sin(kPi * x.x) * std::sin(kPi * x.y)};
}

Vec3 eval_discrete(const Discretization& d, SpaceKind kind, std::span<const double> coeffs,
                   std::size_t tet, const Vec3& ref) {
  switch (kind) {
    case SpaceKind::DiscontinuousVector: return eval_cell_field(coeffs, tet);
    case SpaceKind::NedelecEdge:
    case SpaceKind::NedelecEdgeBC: return eval_edge_field(d, coeffs, tet, ref);
    case SpaceKind::RaviartThomasFace: return eval_face_field(d, coeffs, tet, ref);
    case SpaceKind::LagrangeScalar: break;
  }
  throw InvalidArgument("l2_error needs a vector-valued space");
}

void check_doubling(const std::vector<std::size_t>& levels) {
  if (levels.empty()) throw InvalidArgument("at least one refinement level is required");
  if (levels.front() == 0) throw InvalidArgument("refinement levels must be positive");
  for (std::size_t i = 1; i < levels.size(); ++i)
    if (levels[i] != 2 * levels[i - 1])
      throw InvalidArgument("refinement levels must double (n, 2n, 4n, ...)");
}

}  // namespace

Vec3 ManufacturedCase::j_e(double t, const Vec3& x) const {
  if (source_free) return {};
  return curl_h(t, x) - eps_matrix(params, e(t, x)) * dt_e(t, x);
}

Vec3 ManufacturedCase::j_m(double t, const Vec3& x) const {
  if (source_free) return {};
  return -params.mu0 * dt_h(t, x) - curl_e(t, x);
}

Sources ManufacturedCase::sources() const {
  if (source_free) return {};
  Sources s;
  // Copies keep the sources valid after this case goes out of scope.
  auto self = std::make_shared<ManufacturedCase>(*this);
  s.electric = [self](double t, const Vec3& x) { return self->j_e(t, x); };
  s.magnetic = [self](double t, const Vec3& x) { return self->j_m(t, x); };
  return s;
}

ManufacturedCase kerr_manufactured_case(const MaterialParams& params, double t_end) {
  params.validate();
  ManufacturedCase c;
  c.name = "kerr-manufactured";
  c.params = params;
  c.t_end = t_end;
  c.e = [](double t, const Vec3& x) { return std::cos(t) * kerr_e_shape(x); };
  c.dt_e = [](double t, const Vec3& x) { return -std::sin(t) * kerr_e_shape(x); };
  c.curl_e = [](double t, const Vec3& x) { return std::cos(t) * kerr_curl_e_shape(x); };
  c.h = [](double t, const Vec3& x) { return std::sin(t) * swirl(x); };
  c.dt_h = [](double t, const Vec3& x) { return std::cos(t) * swirl(x); };
  c.curl_h = [](double t, const Vec3& x) { return std::sin(t) * curl_swirl(x); };
  return c;
}

ManufacturedCase cavity_mode_case(double t_end) {
  ManufacturedCase c;
  c.name = "cavity";
  c.t_end = t_end;
  c.source_free = true;
  const double w = std::sqrt(2.0) * kPi;
  auto ez = [](const Vec3& x) { return std::sin(kPi * x.x) * std::sin(kPi * x.y); };
  // curl (0, 0, ez) = pi * swirl
  c.e = [=](double t, const Vec3& x) { return Vec3{0.0, 0.0, ez(x) * std::cos(w * t)}; };
  c.dt_e = [=](double t, const Vec3& x) { return Vec3{0.0, 0.0, -w * ez(x) * std::sin(w * t)}; };
  c.curl_e = [=](double t, const Vec3& x) { return (kPi * std::cos(w * t)) * swirl(x); };
  c.h = [=](double t, const Vec3& x) { return (-kPi * std::sin(w * t) / w) * swirl(x); };
  c.dt_h = [=](double t, const Vec3& x) { return (-kPi * std::cos(w * t)) * swirl(x); };
  c.curl_h = [=](double t, const Vec3& x) { return (-kPi * std::sin(w * t) / w) * curl_swirl(x); };
  return c;
}

ManufacturedCase reproduction_case(const MaterialParams& params, double t_end) {
  params.validate();
  ManufacturedCase c;
  c.name = "reproduction";
  c.params = params;
  c.t_end = t_end;
  c.lee_madsen_only = true;
  const Vec3 a{1.0, -2.0, 0.5};
  const Vec3 b{0.3, 0.7, -0.4};
  c.e = [](double, const Vec3&) { return Vec3{}; };
  c.dt_e = c.e;
  c.curl_e = c.e;
  c.h = [=](double t, const Vec3& x) { return (1.0 + t) * (a + cross(b, x)); };
  c.dt_h = [=](double, const Vec3& x) { return a + cross(b, x); };
  c.curl_h = [=](double t, const Vec3&) { return (2.0 * (1.0 + t)) * b; };
  return c;
}

ManufacturedCase zero_source_case(const MaterialParams& params, double t_end) {
  params.validate();
  ManufacturedCase c;
  c.name = "custom-zero-source";
  c.params = params;
  c.t_end = t_end;
  c.source_free = true;
  c.has_exact = false;
  c.e = [](double, const Vec3& x) {
    return Vec3{0.0, 0.0, std::sin(kPi * x.x) * std::sin(kPi * x.y)};
  };
  c.h = [](double, const Vec3&) { return Vec3{}; };
  c.dt_e = c.h;
  c.dt_h = c.h;
  c.curl_e = [](double, const Vec3& x) {
    return Vec3{kPi * std::sin(kPi * x.x) * std::cos(kPi * x.y),
                -kPi * std::cos(kPi * x.x) * std::sin(kPi * x.y), 0.0};
  };
  c.curl_h = c.h;
  return c;
}

ManufacturedCase make_case(const std::string& name, const MaterialParams& params, double t_end) {
  if (name == "cavity") {
    if (params.eps0 != 1.0 || params.mu0 != 1.0 || params.chi1 != 0.0 || params.chi3 != 0.0)
      throw InvalidArgument("the cavity case requires eps0 = mu0 = 1 and chi1 = chi3 = 0");
    return cavity_mode_case(t_end);
  }
  if (name == "kerr-manufactured") return kerr_manufactured_case(params, t_end);
  if (name == "reproduction") return reproduction_case(params, t_end);
  if (name == "custom-zero-source") return zero_source_case(params, t_end);
  throw InvalidArgument("unknown case '" + name +
                        "' (expected cavity, kerr-manufactured, reproduction or custom-zero-source)");
}

double l2_error(const Discretization& d, SpaceKind kind, std::span<const double> coeffs,
                const VectorField& exact, double weight) {
  const QuadratureRule& q = tet_rule();
  double s = 0.0;
  for (std::size_t k = 0; k < d.num_tets(); ++k)
    for (std::size_t iq = 0; iq < q.points.size(); ++iq) {
      const Vec3 diff = eval_discrete(d, kind, coeffs, k, q.points[iq]) -
                        exact(d.geometry[k].map(q.points[iq]));
      s += q.weights[iq] * d.geometry[k].det * norm2(diff);
    }
  return std::sqrt(weight * s);
}

ErrorNorms error_norms(const MaxwellSystem& system, const State& state, const TimeVectorField& e,
                       const TimeVectorField& h) {
  const Discretization& d = system.discretization();
  const MaterialParams& p = system.params();
  const double t = state.t;
  const bool lm = system.formulation() == Formulation::LeeMadsen;
  ErrorNorms out;
  out.e = l2_error(d, lm ? SpaceKind::DiscontinuousVector : SpaceKind::NedelecEdge, state.e,
                   [&](const Vec3& x) { return e(t, x); }, p.eps0);
  out.h = l2_error(d, lm ? SpaceKind::NedelecEdge : SpaceKind::RaviartThomasFace, state.h,
                   [&](const Vec3& x) { return h(t, x); }, p.mu0);
  return out;
}

double eoc(double coarse, double fine, double floor) {
  if (!(coarse > floor) || !(fine > floor)) return std::numeric_limits<double>::quiet_NaN();
  return std::log2(coarse / fine);
}

EocTable run_convergence(const ManufacturedCase& mcase, const std::vector<std::size_t>& levels,
                         const ConvergenceOptions& options) {
  check_doubling(levels);
  if (!mcase.has_exact)
    throw InvalidArgument("case '" + mcase.name + "' has no exact solution to measure against");
  if (mcase.lee_madsen_only && options.formulation != Formulation::LeeMadsen)
    throw InvalidArgument("case '" + mcase.name + "' is only exact for the lee-madsen formulation");

  EocTable table;
  const Sources sources = mcase.sources();
  for (std::size_t n : levels) {
    const Discretization disc = Discretization::build(generate_structured_cube(n));
    const MaxwellSystem system(disc, options.formulation, mcase.params, sources, options.solver);
    const State s0 = system.initialize([&](const Vec3& x) { return mcase.e(0.0, x); },
                                       [&](const Vec3& x) { return mcase.h(0.0, x); },
                                       [&](const Vec3& x) { return mcase.curl_h(0.0, x); });
    RunOptions run;
    run.t_end = mcase.t_end;
    run.dt = options.fixed_dt > 0.0 ? options.fixed_dt : options.dt_factor * disc.h * disc.h;
    run.stepper = options.stepper;
    run.track_source_norm = false;
    const RunResult res = simulate(system, s0, run);
    const ErrorNorms err = error_norms(system, res.final_state, mcase.e, mcase.h);

    EocRow row;
    row.n = n;
    row.h = disc.h;
    row.err_e = err.e;
    row.err_h = err.h;
    row.eoc_e = std::numeric_limits<double>::quiet_NaN();
    row.eoc_h = row.eoc_e;
    if (!table.rows.empty()) {
      const EocRow& prev = table.rows.back();
      row.eoc_e = eoc(prev.err_e, row.err_e, options.eoc_floor);
      row.eoc_h = eoc(prev.err_h, row.err_h, options.eoc_floor);
      const bool above_floor = prev.err_e + prev.err_h > options.eoc_floor;
      if (above_floor && row.err_e + row.err_h > prev.err_e + prev.err_h) table.monotone = false;
    }
    table.rows.push_back(row);
  }
  return table;
}

std::vector<ProjectionRow> projection_study(const std::vector<std::size_t>& levels) {
  check_doubling(levels);
  const VectorField w = [](const Vec3& x) {
    return Vec3{std::sin(kPi * x.x) * std::sin(kPi * x.y), std::cos(kPi * x.z),
                x.x * x.y * std::exp(x.z)};
  };
  std::vector<ProjectionRow> rows;
  for (std::size_t n : levels) {
    const Discretization disc = Discretization::build(generate_structured_cube(n));
    ProjectionRow row;
    row.n = n;
    row.h = disc.h;
    row.err_p = l2_error(disc, SpaceKind::DiscontinuousVector, l2_project(disc, w), w);
    row.err_pi =
        l2_error(disc, SpaceKind::NedelecEdge, curl_project(disc, swirl, curl_swirl), swirl);
    row.eoc_p = std::numeric_limits<double>::quiet_NaN();
    row.eoc_pi = row.eoc_p;
    if (!rows.empty()) {
      row.eoc_p = eoc(rows.back().err_p, row.err_p);
      row.eoc_pi = eoc(rows.back().err_pi, row.err_pi);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace kerrfem
