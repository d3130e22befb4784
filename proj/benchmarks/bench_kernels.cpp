#include <benchmark/benchmark.h>

#include "kerrfem/assembly.hpp"
#include "kerrfem/dynamics.hpp"
#include "kerrfem/verification.hpp"

using namespace kerrfem;

static void BM_Topology(benchmark::State& state) {
  const Mesh mesh = generate_structured_cube(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_topology(mesh));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(mesh.tets.size()));
}
BENCHMARK(BM_Topology)->Arg(4)->Arg(8)->Arg(16);

static void BM_EdgeMass(benchmark::State& state) {
  const Discretization d = Discretization::build(generate_structured_cube(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(assemble_mass(d, SpaceKind::NedelecEdge, 1.0));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(d.num_tets()));
}
BENCHMARK(BM_EdgeMass)->Arg(4)->Arg(8)->Arg(16);

static void BM_EdgeMassCg(benchmark::State& state) {
  const Discretization d = Discretization::build(generate_structured_cube(static_cast<std::size_t>(state.range(0))));
  const SparseMatrix m = assemble_mass(d, SpaceKind::NedelecEdge, 1.0);
  const Vector b(m.rows(), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(cg_solve(m, b, 1e-11));
}
BENCHMARK(BM_EdgeMassCg)->Arg(4)->Arg(8)->Arg(16);

static void BM_MidpointStep(benchmark::State& state) {
  const Formulation f = state.range(1) == 0 ? Formulation::LeeMadsen : Formulation::Nedelec;
  const Discretization d = Discretization::build(generate_structured_cube(static_cast<std::size_t>(state.range(0))));
  const ManufacturedCase c = zero_source_case({.chi3 = 1.0});
  const MaxwellSystem sys(d, f, c.params);
  const State s0 = sys.initialize([&](const Vec3& x) { return c.e(0.0, x); }, {}, {});
  for (auto _ : state) benchmark::DoNotOptimize(sys.step_midpoint(s0, 1e-2));
}
BENCHMARK(BM_MidpointStep)->Args({4, 0})->Args({8, 0})->Args({4, 1})->Args({8, 1})
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
