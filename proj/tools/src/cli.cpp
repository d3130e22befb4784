#include "kerrfem_cli/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "kerrfem/assembly.hpp"
#include "kerrfem/dynamics.hpp"
#include "kerrfem/error.hpp"
#include "kerrfem/io.hpp"
#include "kerrfem/mesh.hpp"
#include "kerrfem/verification.hpp"

namespace kerrfem::cli {

namespace {

struct MaterialFlags {
  double eps0 = 1.0, mu0 = 1.0, chi1 = 0.0, chi3 = 0.0;

  void add_to(CLI::App* app) {
    app->add_option("--eps0", eps0, "vacuum permittivity")->capture_default_str();
    app->add_option("--mu0", mu0, "vacuum permeability")->capture_default_str();
    app->add_option("--chi1", chi1, "linear susceptibility (>= 0)")->capture_default_str();
    app->add_option("--chi3", chi3, "Kerr susceptibility (>= 0)")->capture_default_str();
  }

  MaterialParams params() const {
    MaterialParams p{eps0, mu0, chi1, chi3};
    p.validate();
    return p;
  }
};

const std::vector<std::string> kFormulations{"lee-madsen", "nedelec"};
const std::vector<std::string> kSteppers{"midpoint", "rk4"};

std::string num(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

// `path` of "-" or "" means the given stream.
void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-")
    out << text;
  else
    write_text_file(path, text);
}

void print_energy_report(std::ostream& out, const EnergyTrace& trace) {
  const ResidualReport res = energy_law_residual(trace);
  const BoundReport bound = stability_bound_check(trace);
  const double w0 = trace.energy.front();
  double drift = 0.0;
  double max_e = 0.0;
  for (std::size_t i = 0; i < trace.energy.size(); ++i) {
    drift = std::max(drift, std::abs(trace.energy[i] - w0));
    max_e = std::max(max_e, trace.max_abs_e[i]);
  }
  out << "W(0)                      " << num("%.12e", w0) << '\n';
  out << "W(T)                      " << num("%.12e", trace.energy.back()) << '\n';
  out << "max |W(t) - W(0)| / W(0)  " << (w0 > 0.0 ? num("%.3e", drift / w0) : "NA") << '\n';
  out << "max |energy-law residual| " << num("%.3e", res.max_abs) << '\n';
  out << "max W / stability bound   " << num("%.6f", bound.max_ratio) << '\n';
  out << "bound violations          " << bound.violations << '\n';
  out << "max |E_h|                 " << num("%.6e", max_e) << '\n';
}

int cmd_mesh(std::size_t n, const std::string& path, std::ostream& out) {
  const Mesh mesh = generate_structured_cube(n);
  write_mesh_file(mesh, path);
  out << "wrote " << mesh.vertices.size() << " vertices, " << mesh.tets.size() << " tets to "
      << path << '\n';
  return 0;
}

int cmd_run(const std::string& config_path, std::ostream& out) {
  const RunConfig cfg = read_config_file(config_path);
  const Mesh mesh = cfg.mesh_file.empty() ? generate_structured_cube(cfg.mesh_n)
                                          : read_mesh_file(cfg.mesh_file);
  const Discretization disc = Discretization::build(mesh);
  const ManufacturedCase mcase = make_case(cfg.case_name, cfg.material, cfg.t_end);
  SolverOptions solver;
  solver.cg_tol = cfg.cg_tol;
  solver.nonlinear_tol = cfg.nonlinear_tol;
  const MaxwellSystem system(disc, cfg.formulation, cfg.material, mcase.sources(), solver);
  const State s0 = system.initialize([&](const Vec3& x) { return mcase.e(0.0, x); },
                                     [&](const Vec3& x) { return mcase.h(0.0, x); },
                                     [&](const Vec3& x) { return mcase.curl_h(0.0, x); });

  RunOptions run;
  run.t_end = cfg.t_end;
  run.dt = cfg.dt;
  run.stepper = cfg.stepper;
  std::size_t vtk_files = 0;
  if (cfg.vtk_every > 0)
    run.observer = [&](const State& s, std::size_t step) {
      if (step % cfg.vtk_every != 0) return;
      const CellFields f = sample_cell_fields(system, s);
      char name[32];
      std::snprintf(name, sizeof name, "_%06zu.vtk", step);
      write_vtk_file(cfg.vtk_prefix + name, disc.mesh, f.e, f.h,
                     "kerrfem " + cfg.case_name + " t=" + num("%.9e", s.t));
      ++vtk_files;
    };
  const RunResult res = simulate(system, s0, run);

  std::ostringstream csv;
  write_energy_csv(csv, res.trace);
  emit(cfg.energy_csv, csv.str(), out);

  out << "case " << cfg.case_name << ", " << to_string(cfg.formulation) << ", "
      << to_string(cfg.stepper) << ", " << disc.num_tets() << " tets, h = " << num("%.6e", disc.h)
      << '\n';
  out << "steps " << res.steps << ", dt = " << num("%.6e", res.dt) << '\n';
  print_energy_report(out, res.trace);
  if (mcase.has_exact) {
    const ErrorNorms err = error_norms(system, res.final_state, mcase.e, mcase.h);
    out << "||E_h - E||_eps0 at T     " << num("%.6e", err.e) << '\n';
    out << "||H_h - H||_mu0 at T      " << num("%.6e", err.h) << '\n';
  }
  if (cfg.vtk_every > 0) out << "vtk files                 " << vtk_files << '\n';
  if (cfg.energy_csv != "-" && !cfg.energy_csv.empty())
    out << "energy trace              " << cfg.energy_csv << '\n';
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite element time-domain Maxwell solver for Kerr media", "kerrfem"};
  app.require_subcommand(1);

  CLI::App* mesh_cmd = app.add_subcommand("mesh", "generate a structured unit-cube mesh file");
  std::size_t mesh_n = 0;
  std::string mesh_out;
  mesh_cmd->add_option("--n", mesh_n, "cells per side")->required()->check(CLI::PositiveNumber);
  mesh_cmd->add_option("--out", mesh_out, "output mesh file")->required();

  CLI::App* run_cmd = app.add_subcommand("run", "simulate from a config file");
  std::string config_path;
  run_cmd->add_option("--config", config_path, "run configuration")->required();

  CLI::App* conv_cmd = app.add_subcommand("converge", "mesh-convergence (EOC) study");
  std::string conv_case = "cavity";
  std::vector<std::size_t> levels{2, 4, 8};
  std::string formulation = "lee-madsen";
  std::string stepper = "midpoint";
  double conv_t_end = 1.0;
  double dt_factor = 0.05;
  double fixed_dt = 0.0;
  std::string conv_out;
  MaterialFlags conv_mat;
  conv_cmd->add_option("--case", conv_case, "cavity | kerr-manufactured | reproduction")
      ->check(CLI::IsMember({"cavity", "kerr-manufactured", "reproduction"}))
      ->capture_default_str();
  conv_cmd->add_option("--levels", levels, "doubling mesh resolutions, e.g. 2,4,8")
      ->delimiter(',')
      ->capture_default_str();
  conv_cmd->add_option("--formulation", formulation)->check(CLI::IsMember(kFormulations))
      ->capture_default_str();
  conv_cmd->add_option("--stepper", stepper)->check(CLI::IsMember(kSteppers))->capture_default_str();
  conv_cmd->add_option("--t-end", conv_t_end, "final time")->check(CLI::PositiveNumber)
      ->capture_default_str();
  conv_cmd->add_option("--dt-factor", dt_factor, "dt = factor * h^2")->check(CLI::PositiveNumber)
      ->capture_default_str();
  conv_cmd->add_option("--dt", fixed_dt, "fixed time step (overrides --dt-factor)")
      ->check(CLI::PositiveNumber);
  conv_cmd->add_option("--out", conv_out, "CSV output (default stdout)");
  conv_mat.add_to(conv_cmd);

  CLI::App* proj_cmd = app.add_subcommand("project", "projection-error study for P_h and Pi_h");
  std::vector<std::size_t> proj_levels{2, 4, 8};
  std::string proj_out;
  proj_cmd->add_option("--levels", proj_levels, "doubling mesh resolutions")->delimiter(',')
      ->capture_default_str();
  proj_cmd->add_option("--out", proj_out, "CSV output (default stdout)");

  CLI::App* energy_cmd = app.add_subcommand("energy", "energy-law and stability-bound report");
  std::string energy_case = "cavity";
  std::size_t energy_n = 4;
  double energy_t_end = 5.0;
  double energy_dt = 1e-3;
  std::string energy_form = "lee-madsen";
  std::string energy_stepper = "midpoint";
  std::string energy_csv;
  MaterialFlags energy_mat;
  energy_cmd->add_option("--case", energy_case, "cavity | kerr-manufactured | custom-zero-source")
      ->check(CLI::IsMember({"cavity", "kerr-manufactured", "custom-zero-source"}))
      ->capture_default_str();
  energy_cmd->add_option("--n", energy_n, "cells per side")->check(CLI::PositiveNumber)
      ->capture_default_str();
  energy_cmd->add_option("--t-end", energy_t_end)->check(CLI::PositiveNumber)->capture_default_str();
  energy_cmd->add_option("--dt", energy_dt)->check(CLI::PositiveNumber)->capture_default_str();
  energy_cmd->add_option("--formulation", energy_form)->check(CLI::IsMember(kFormulations))
      ->capture_default_str();
  energy_cmd->add_option("--stepper", energy_stepper)->check(CLI::IsMember(kSteppers))
      ->capture_default_str();
  energy_cmd->add_option("--csv", energy_csv, "also write the energy trace here");
  energy_mat.add_to(energy_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return 2;
  }

  try {
    if (mesh_cmd->parsed()) return cmd_mesh(mesh_n, mesh_out, out);
    if (run_cmd->parsed()) return cmd_run(config_path, out);

    if (conv_cmd->parsed()) {
      ConvergenceOptions opt;
      opt.formulation = parse_formulation(formulation);
      opt.stepper = parse_stepper(stepper);
      opt.dt_factor = dt_factor;
      opt.fixed_dt = fixed_dt;
      const ManufacturedCase mcase = make_case(conv_case, conv_mat.params(), conv_t_end);
      const EocTable table = run_convergence(mcase, levels, opt);
      std::ostringstream csv;
      write_eoc_csv(csv, table);
      emit(conv_out, csv.str(), out);
      if (!table.monotone) err << "warning: errors do not decrease monotonically\n";
      return 0;
    }

    if (proj_cmd->parsed()) {
      std::ostringstream csv;
      write_projection_csv(csv, projection_study(proj_levels));
      emit(proj_out, csv.str(), out);
      return 0;
    }

    if (energy_cmd->parsed()) {
      const MaterialParams p = energy_mat.params();
      const ManufacturedCase mcase = make_case(energy_case, p, energy_t_end);
      const Discretization disc = Discretization::build(generate_structured_cube(energy_n));
      const MaxwellSystem system(disc, parse_formulation(energy_form), p, mcase.sources());
      const State s0 = system.initialize([&](const Vec3& x) { return mcase.e(0.0, x); },
                                         [&](const Vec3& x) { return mcase.h(0.0, x); },
                                         [&](const Vec3& x) { return mcase.curl_h(0.0, x); });
      RunOptions run;
      run.t_end = energy_t_end;
      run.dt = energy_dt;
      run.stepper = parse_stepper(energy_stepper);
      const RunResult res = simulate(system, s0, run);
      out << "case " << energy_case << ", " << energy_form << ", " << energy_stepper << ", n = "
          << energy_n << ", steps " << res.steps << ", dt = " << num("%.6e", res.dt) << '\n';
      print_energy_report(out, res.trace);
      if (!energy_csv.empty()) {
        std::ostringstream csv;
        write_energy_csv(csv, res.trace);
        write_text_file(energy_csv, csv.str());
      }
      return 0;
    }
  } catch (const SolverError& e) {
    err << "solver failure: " << e.what() << '\n';
    return 1;
  } catch (const InvalidArgument& e) {
    err << "invalid input: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace kerrfem::cli
