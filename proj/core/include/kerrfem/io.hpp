#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kerrfem/dynamics.hpp"
#include "kerrfem/error.hpp"
#include "kerrfem/material.hpp"
#include "kerrfem/mesh.hpp"
#include "kerrfem/verification.hpp"

namespace kerrfem {

/// Parse failure; line() is 1-based, 0 for a missing key.
class ConfigError : public IoError {
 public:
  ConfigError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Settings of one `run`. Keys (`section.key = value`, `#` starts a comment):
///
///   case                = cavity | kerr-manufactured | custom-zero-source  (required)
///   formulation         = lee-madsen | nedelec                            (lee-madsen)
///   mesh.n              = structured cube resolution    (mesh.n or mesh.file required)
///   mesh.file           = path to a tetmesh file
///   material.eps0/mu0   = 1
///   material.chi1/chi3  = 0
///   time.t_end, time.dt                                                  (required)
///   time.stepper        = midpoint | rk4                                  (midpoint)
///   output.vtk_every    = write VTK every m steps, 0 = never              (0)
///   output.vtk_prefix   = fields
///   output.energy_csv   = energy.csv
///   solver.cg_tol, solver.nonlinear_tol                                   (1e-11)
///
/// `case` and `formulation` may also be spelled `run.case`, `run.formulation`.
struct RunConfig {
  std::string case_name;
  Formulation formulation = Formulation::LeeMadsen;
  std::size_t mesh_n = 0;
  std::string mesh_file;
  MaterialParams material;
  double t_end = 0.0;
  double dt = 0.0;
  Stepper stepper = Stepper::Midpoint;
  std::size_t vtk_every = 0;
  std::string vtk_prefix = "fields";
  std::string energy_csv = "energy.csv";
  double cg_tol = 1e-11;
  double nonlinear_tol = 1e-11;
};

/// Throws ConfigError on an unknown key, a malformed or out-of-range value, a
/// repeated key, or a missing required key.
RunConfig parse_config(std::string_view text);
RunConfig read_config_file(const std::string& path);

/// Canonical text: every key, sorted, one per line. parse_config of the
/// result gives back an equal config.
std::string serialize_config(const RunConfig& config);

const char* to_string(Stepper s);
Formulation parse_formulation(std::string_view s);
Stepper parse_stepper(std::string_view s);

/// E_h and H_h sampled at each tet centroid.
struct CellFields {
  std::vector<Vec3> e;
  std::vector<Vec3> h;
};

CellFields sample_cell_fields(const MaxwellSystem& system, const State& state);

/// Legacy ASCII VTK 3.0 unstructured grid, cell-data vectors E and H,
/// numbers in %.8e.
void write_vtk(std::ostream& out, const Mesh& mesh, std::span<const Vec3> cell_e,
               std::span<const Vec3> cell_h, const std::string& title = "kerrfem fields");
void write_vtk_file(const std::string& path, const Mesh& mesh, std::span<const Vec3> cell_e,
                    std::span<const Vec3> cell_h, const std::string& title = "kerrfem fields");

/// %.9e, or NA for NaN.
std::string format_number(double v);

/// Columns step,t,W,source_work,residual,bound_ratio,max_abs_e; the residual
/// column of row n belongs to the step ending at t_n (NA on row 0).
void write_energy_csv(std::ostream& out, const EnergyTrace& trace);
/// Columns n,h,errE,errH,eocE,eocH.
void write_eoc_csv(std::ostream& out, const EocTable& table);
/// Columns n,h,errP,errPi,eocP,eocPi.
void write_projection_csv(std::ostream& out, const std::vector<ProjectionRow>& rows);

/// Writes `content` to `path`, throwing IoError with the path on failure.
void write_text_file(const std::string& path, std::string_view content);

}  // namespace kerrfem
