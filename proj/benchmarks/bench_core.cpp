#include <benchmark/benchmark.h>

#include "cqed/lyapunov.hpp"
#include "cqed/runs.hpp"

using namespace cqed;

namespace {

Liouvillian full_model(int n_z, int n_y) {
  RunConfig c;
  c.system = SystemKind::full;
  c.g0_mhz = 33.9;
  c.kappa_mhz = 4.1;
  c.gamma_mhz = 2.6;
  c.delta_omega_c1_mhz = 4.4;
  c.u0_mhz = -43;
  const HilbertSpace s = build_space(c, n_z, n_y);
  return build_liouvillian(build_hamiltonian(c, s, c.drive_config(), -1.0), c.system_params());
}

void BM_ClebschGordan(benchmark::State& state) {
  for (auto _ : state)
    for (int m = -4; m <= 4; ++m)
      for (int q = -1; q <= 1; ++q)
        if (m + q >= -5 && m + q <= 5) benchmark::DoNotOptimize(cg_coefficient(4, 1, m, q, 5, m + q));
}
BENCHMARK(BM_ClebschGordan);

void BM_DipoleSet(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(build_dipole_set(AtomicLevelScheme::cesium_d2()));
}
BENCHMARK(BM_DipoleSet);

void BM_Superoperator(benchmark::State& state) {
  const Liouvillian l = full_model(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(l.superoperator());
}
BENCHMARK(BM_Superoperator)->Args({2, 1})->Args({2, 2})->Unit(benchmark::kMillisecond);

void BM_LiouvillianApply(benchmark::State& state) {
  const Liouvillian l = full_model(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const int n = l.space().total_dim();
  const DenseMatrix rho = DenseMatrix::Identity(n, n) / double(n);
  for (auto _ : state) benchmark::DoNotOptimize(l.apply(rho));
}
BENCHMARK(BM_LiouvillianApply)->Args({2, 1})->Args({2, 2})->Unit(benchmark::kMicrosecond);

void BM_LyapunovSolve(benchmark::State& state) {
  const Liouvillian l = full_model(2, 2);
  const LyapunovSolver lyap{DenseMatrix(l.effective_generator())};
  const int n = l.space().total_dim();
  const DenseMatrix y = DenseMatrix::Identity(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(lyap.solve(y));
}
BENCHMARK(BM_LyapunovSolve)->Unit(benchmark::kMillisecond);

void BM_SteadyState(benchmark::State& state) {
  const Liouvillian l = full_model(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  SteadyStateOptions o;
  o.method = SteadyStateMethod::krylov;
  for (auto _ : state) benchmark::DoNotOptimize(steady_state(l, o));
}
BENCHMARK(BM_SteadyState)->Args({2, 1})->Args({2, 2})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
