#include "schrocap/capacity.hpp"
#include "schrocap/spectrum.hpp"
#include "schrocap/sweep.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace schrocap;

namespace {

SchrodingerOperator make_ring(Index n) {
  auto m = build_ring(n, 2.0 * M_PI);
  const Index nv = m.n_vertices;
  return assemble(std::move(m), Potential(Vector::Constant(nv, 1.0)));
}

SchrodingerOperator make_torus(Index n) {
  auto m = build_torus(n, n, 2.0 * M_PI, 2.0 * M_PI);
  const Index nv = m.n_vertices;
  return assemble(std::move(m), Potential(Vector::Constant(nv, 1.0)));
}

void bm_dense_ring(benchmark::State& state) {
  const auto op = make_ring(state.range(0));
  for (auto _ : state) {
    const Spectrum s = solve_spectrum(op, 6);
    benchmark::DoNotOptimize(s.eigenvalues.sum());
  }
}
BENCHMARK(bm_dense_ring)->Arg(64)->Arg(256)->Arg(1024);

void bm_lanczos_ring(benchmark::State& state) {
  const auto op = make_ring(state.range(0));
  SolverOptions opts;
  opts.backend = SolverBackend::Iterative;
  for (auto _ : state) {
    const Spectrum s = solve_spectrum(op, 6, opts);
    benchmark::DoNotOptimize(s.eigenvalues.sum());
  }
}
BENCHMARK(bm_lanczos_ring)->Arg(64)->Arg(256)->Arg(1024)->Arg(4096);

void bm_lanczos_torus(benchmark::State& state) {
  const auto op = make_torus(state.range(0));
  SolverOptions opts;
  opts.backend = SolverBackend::Iterative;
  for (auto _ : state) {
    const Spectrum s = solve_spectrum(op, 4, opts);
    benchmark::DoNotOptimize(s.eigenvalues.sum());
  }
}
BENCHMARK(bm_lanczos_torus)->Arg(16)->Arg(32)->Arg(64);

void bm_capacity_torus(benchmark::State& state) {
  const auto op = make_torus(state.range(0));
  const Spectrum full = solve_spectrum(op, 1);
  const auto hole = hole_ball(op.manifold(), 0, 0.2);
  for (auto _ : state) {
    const CapacityResult r = compute_capacity(op, hole, full.eigenvectors.col(0));
    benchmark::DoNotOptimize(r.cap);
  }
}
BENCHMARK(bm_capacity_torus)->Arg(16)->Arg(32)->Arg(64);

void bm_sweep_row(benchmark::State& state) {
  SweepConfig cfg;
  cfg.manifold = build_torus(16, 16, 2.0 * M_PI, 2.0 * M_PI);
  cfg.potential.constant = 1.0;
  cfg.hole_center = 0;
  cfg.radii = {0.2};
  cfg.k_max = 4;
  cfg.solver.backend = SolverBackend::Iterative;
  for (auto _ : state) {
    const auto rows = bound_sweep(cfg);
    benchmark::DoNotOptimize(rows.size());
  }
}
BENCHMARK(bm_sweep_row);

} // namespace

BENCHMARK_MAIN();
