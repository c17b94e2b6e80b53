#include <cmath>
#include <random>

#include <benchmark/benchmark.h>

#include "rydtweezer/evolve.hpp"
#include "rydtweezer/spectral.hpp"

using namespace rydtweezer;

namespace {

SystemConfig chain(int n) {
  SystemConfig c;
  c.n_atoms = n;
  c.spacing_over_Rb = 1.2;
  c.eta_override = LambDickePair{0.1, 0.09};
  return c;
}

StateVector random_state(int n) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  StateVector psi(n);
  for (auto& a : psi.amplitudes()) a = {g(rng), g(rng)};
  return psi;
}

void BM_Apply(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const SystemConfig c = chain(n);
  const Hamiltonian h(c, derive(c));
  const StateVector psi = random_state(n);
  StateVector out(n);
  for (auto _ : state) {
    h.apply(psi, out, c.omega0);
    benchmark::DoNotOptimize(out.amplitudes().data());
  }
  state.SetComplexityN(static_cast<benchmark::IterationCount>(h.dimension()) * n);
}
BENCHMARK(BM_Apply)->DenseRange(2, 10, 2)->Complexity(benchmark::oN);

void BM_Rk4Step(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const SystemConfig c = chain(n);
  const DerivedParams d = derive(c);
  const Hamiltonian h(c, d);
  StateVector psi = random_state(n);
  Rk4Workspace ws(psi.size());
  const double dt = c.dt_over_T * d.rabi_period_T;
  double t = 0.0;
  for (auto _ : state) {
    rk4_step_inplace(psi, t, dt, h, ws);
    t += dt;
  }
  state.SetComplexityN(static_cast<benchmark::IterationCount>(h.dimension()) * n);
}
BENCHMARK(BM_Rk4Step)->DenseRange(2, 10, 2)->Complexity(benchmark::oN);

void BM_Dft(benchmark::State& state) {
  const auto samples = static_cast<std::size_t>(state.range(0));
  std::vector<double> t(samples), x(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    t[i] = 0.01 * static_cast<double>(i);
    x[i] = std::cos(0.3 * static_cast<double>(i));
  }
  const TimeWindow w{0.0, 0.01 * static_cast<double>(samples)};
  for (auto _ : state) benchmark::DoNotOptimize(dft(x, t, w, 1e-4).max_raw);
  state.SetComplexityN(static_cast<benchmark::IterationCount>(samples));
}
BENCHMARK(BM_Dft)->RangeMultiplier(2)->Range(512, 4096)->Complexity(benchmark::oNSquared);

}  // namespace

BENCHMARK_MAIN();
