#include "kerrfem/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace kerrfem {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view v, std::size_t line, std::string_view key) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out))
    throw ConfigError(line, std::string(key) + ": expected a number, got '" + std::string(v) + "'");
  return out;
}

std::size_t parse_count(std::string_view v, std::size_t line, std::string_view key) {
  std::size_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError(line, std::string(key) + ": expected a nonnegative integer, got '" +
                                std::string(v) + "'");
  return out;
}

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

std::string canonical_key(std::string_view key) {
  if (key == "run.case") return "case";
  if (key == "run.formulation") return "formulation";
  return std::string(key);
}

}  // namespace

ConfigError::ConfigError(std::size_t line, const std::string& what)
    : IoError(line == 0 ? "config: " + what : "config line " + std::to_string(line) + ": " + what),
      line_(line) {}

const char* to_string(Stepper s) { return s == Stepper::Midpoint ? "midpoint" : "rk4"; }

Formulation parse_formulation(std::string_view s) {
  if (s == "lee-madsen") return Formulation::LeeMadsen;
  if (s == "nedelec") return Formulation::Nedelec;
  throw InvalidArgument("unknown formulation '" + std::string(s) +
                        "' (expected lee-madsen or nedelec)");
}

Stepper parse_stepper(std::string_view s) {
  if (s == "midpoint") return Stepper::Midpoint;
  if (s == "rk4") return Stepper::Rk4;
  throw InvalidArgument("unknown stepper '" + std::string(s) + "' (expected midpoint or rk4)");
}

RunConfig parse_config(std::string_view text) {
  RunConfig c;
  std::map<std::string, std::size_t> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(line_no, "expected 'key = value', got '" + std::string(line) + "'");
    const std::string key = canonical_key(trim(line.substr(0, eq)));
    const std::string_view v = trim(line.substr(eq + 1));
    if (v.empty()) throw ConfigError(line_no, key + ": missing value");
    if (!seen.emplace(key, line_no).second)
      throw ConfigError(line_no, key + ": repeated (first set on line " +
                                     std::to_string(seen[key]) + ")");

    auto positive = [&](double x) {
      if (!(x > 0.0)) throw ConfigError(line_no, key + " must be > 0");
      return x;
    };
    auto susceptibility = [&](double x) {
      if (x < 0.0)
        throw ConfigError(line_no, key + " must be >= 0: nonnegative susceptibilities keep "
                                         "eps(E) uniformly positive definite");
      return x;
    };
    auto tolerance = [&](double x) {
      if (!(x > 0.0 && x < 1.0)) throw ConfigError(line_no, key + " must lie in (0, 1)");
      return x;
    };

    try {
      if (key == "case") {
        c.case_name = std::string(v);
        if (c.case_name != "cavity" && c.case_name != "kerr-manufactured" &&
            c.case_name != "custom-zero-source")
          throw ConfigError(line_no, "case: unknown value '" + c.case_name +
                                         "' (expected cavity, kerr-manufactured or "
                                         "custom-zero-source)");
      } else if (key == "formulation") {
        c.formulation = parse_formulation(v);
      } else if (key == "mesh.n") {
        c.mesh_n = parse_count(v, line_no, key);
        if (c.mesh_n == 0) throw ConfigError(line_no, "mesh.n must be >= 1");
      } else if (key == "mesh.file") {
        c.mesh_file = std::string(v);
      } else if (key == "material.eps0") {
        c.material.eps0 = positive(parse_double(v, line_no, key));
      } else if (key == "material.mu0") {
        c.material.mu0 = positive(parse_double(v, line_no, key));
      } else if (key == "material.chi1") {
        c.material.chi1 = susceptibility(parse_double(v, line_no, key));
      } else if (key == "material.chi3") {
        c.material.chi3 = susceptibility(parse_double(v, line_no, key));
      } else if (key == "time.t_end") {
        c.t_end = positive(parse_double(v, line_no, key));
      } else if (key == "time.dt") {
        c.dt = positive(parse_double(v, line_no, key));
      } else if (key == "time.stepper") {
        c.stepper = parse_stepper(v);
      } else if (key == "output.vtk_every") {
        c.vtk_every = parse_count(v, line_no, key);
      } else if (key == "output.vtk_prefix") {
        c.vtk_prefix = std::string(v);
      } else if (key == "output.energy_csv") {
        c.energy_csv = std::string(v);
      } else if (key == "solver.cg_tol") {
        c.cg_tol = tolerance(parse_double(v, line_no, key));
      } else if (key == "solver.nonlinear_tol") {
        c.nonlinear_tol = tolerance(parse_double(v, line_no, key));
      } else {
        throw ConfigError(line_no, "unknown key '" + key + "'");
      }
    } catch (const InvalidArgument& e) {
      throw ConfigError(line_no, e.what());
    }
  }

  for (const char* required : {"case", "time.t_end", "time.dt"})
    if (!seen.count(required)) throw ConfigError(0, std::string("missing required key '") + required + "'");
  if (!seen.count("mesh.n") && !seen.count("mesh.file"))
    throw ConfigError(0, "missing required key 'mesh.n' or 'mesh.file'");
  if (seen.count("mesh.n") && seen.count("mesh.file"))
    throw ConfigError(seen["mesh.file"], "mesh.n and mesh.file are mutually exclusive");
  if (c.case_name == "cavity" &&
      (c.material.eps0 != 1.0 || c.material.mu0 != 1.0 || c.material.chi1 != 0.0 ||
       c.material.chi3 != 0.0))
    throw ConfigError(seen["case"], "case cavity requires eps0 = mu0 = 1 and chi1 = chi3 = 0");
  return c;
}

RunConfig read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(e.line(), path + ": " + e.what());
  }
}

std::string serialize_config(const RunConfig& c) {
  std::map<std::string, std::string> kv;
  kv["case"] = c.case_name;
  kv["formulation"] = to_string(c.formulation);
  if (c.mesh_file.empty())
    kv["mesh.n"] = std::to_string(c.mesh_n);
  else
    kv["mesh.file"] = c.mesh_file;
  kv["material.eps0"] = fmt("%.17g", c.material.eps0);
  kv["material.mu0"] = fmt("%.17g", c.material.mu0);
  kv["material.chi1"] = fmt("%.17g", c.material.chi1);
  kv["material.chi3"] = fmt("%.17g", c.material.chi3);
  kv["time.t_end"] = fmt("%.17g", c.t_end);
  kv["time.dt"] = fmt("%.17g", c.dt);
  kv["time.stepper"] = to_string(c.stepper);
  kv["output.vtk_every"] = std::to_string(c.vtk_every);
  kv["output.vtk_prefix"] = c.vtk_prefix;
  kv["output.energy_csv"] = c.energy_csv;
  kv["solver.cg_tol"] = fmt("%.17g", c.cg_tol);
  kv["solver.nonlinear_tol"] = fmt("%.17g", c.nonlinear_tol);
  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

CellFields sample_cell_fields(const MaxwellSystem& system, const State& state) {
  const Discretization& d = system.discretization();
  const Vec3 centroid{0.25, 0.25, 0.25};
  CellFields f;
  f.e.resize(d.num_tets());
  f.h.resize(d.num_tets());
  const bool lm = system.formulation() == Formulation::LeeMadsen;
  for (std::size_t k = 0; k < d.num_tets(); ++k) {
    f.e[k] = lm ? eval_cell_field(state.e, k) : eval_edge_field(d, state.e, k, centroid);
    f.h[k] = lm ? eval_edge_field(d, state.h, k, centroid) : eval_face_field(d, state.h, k, centroid);
  }
  return f;
}

void write_vtk(std::ostream& out, const Mesh& mesh, std::span<const Vec3> cell_e,
               std::span<const Vec3> cell_h, const std::string& title) {
  const std::size_t nt = mesh.tets.size();
  if (cell_e.size() != nt || cell_h.size() != nt)
    throw InvalidArgument("cell fields must have one value per tet");
  auto vec = [&out](const Vec3& v) {
    out << fmt("%.8e", v.x) << ' ' << fmt("%.8e", v.y) << ' ' << fmt("%.8e", v.z) << '\n';
  };
  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.vertices.size() << " double\n";
  for (const Vec3& p : mesh.vertices) vec(p);
  out << "CELLS " << nt << ' ' << 5 * nt << '\n';
  for (const Tet& t : mesh.tets) out << "4 " << t[0] << ' ' << t[1] << ' ' << t[2] << ' ' << t[3] << '\n';
  out << "CELL_TYPES " << nt << '\n';
  for (std::size_t k = 0; k < nt; ++k) out << "10\n";
  out << "CELL_DATA " << nt << '\n';
  out << "VECTORS E double\n";
  for (const Vec3& v : cell_e) vec(v);
  out << "VECTORS H double\n";
  for (const Vec3& v : cell_h) vec(v);
}

void write_vtk_file(const std::string& path, const Mesh& mesh, std::span<const Vec3> cell_e,
                    std::span<const Vec3> cell_h, const std::string& title) {
  std::ostringstream ss;
  write_vtk(ss, mesh, cell_e, cell_h, title);
  write_text_file(path, ss.str());
}

std::string format_number(double v) {
  if (std::isnan(v)) return "NA";
  return fmt("%.9e", v);
}

void write_energy_csv(std::ostream& out, const EnergyTrace& trace) {
  const ResidualReport res = energy_law_residual(trace);
  const BoundReport bound = stability_bound_check(trace);
  out << "step,t,W,source_work,residual,bound_ratio,max_abs_e\n";
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    out << i << ',' << format_number(trace.times[i]) << ',' << format_number(trace.energy[i]) << ','
        << format_number(trace.source_work[i]) << ','
        << (i == 0 ? std::string("NA") : format_number(res.residuals[i - 1])) << ','
        << format_number(bound.ratios[i]) << ',' << format_number(trace.max_abs_e[i]) << '\n';
  }
}

void write_eoc_csv(std::ostream& out, const EocTable& table) {
  out << "n,h,errE,errH,eocE,eocH\n";
  for (const EocRow& r : table.rows)
    out << r.n << ',' << format_number(r.h) << ',' << format_number(r.err_e) << ','
        << format_number(r.err_h) << ',' << format_number(r.eoc_e) << ','
        << format_number(r.eoc_h) << '\n';
}

void write_projection_csv(std::ostream& out, const std::vector<ProjectionRow>& rows) {
  out << "n,h,errP,errPi,eocP,eocPi\n";
  for (const ProjectionRow& r : rows)
    out << r.n << ',' << format_number(r.h) << ',' << format_number(r.err_p) << ','
        << format_number(r.err_pi) << ',' << format_number(r.eoc_p) << ','
        << format_number(r.eoc_pi) << '\n';
}

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace kerrfem
