// Microbenchmarks for the hot paths: FFTs, energy evaluation and gradients
// per descriptor family, filter-bank construction, descent steps, and the
// stochastic ground-truth generators.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <memory>

#include "mcgd/energy.hpp"
#include "mcgd/filters.hpp"
#include "mcgd/grid.hpp"
#include "mcgd/processes.hpp"
#include "mcgd/rng.hpp"
#include "mcgd/sampler.hpp"

namespace {

using namespace mcgd;

PeriodicSignal random_signal(GridShape shape, std::uint64_t seed) {
  PeriodicSignal x(shape);
  Rng rng(seed);
  for (auto& v : x.v) v = rng.gaussian();
  return x;
}

std::shared_ptr<const FilterBank> shared_morlet(std::int64_t n, int J, int Q) {
  return std::make_shared<const FilterBank>(build_morlet_2d(n, J, Q));
}

EnergySpec make_spec(Family family, std::int64_t side, int J, int Q, int q2_stride = 8) {
  EnergySpec spec;
  spec.family = family;
  if (family == Family::IsingQuadratic) {
    spec.grid = GridShape::square(side);
  } else if (family == Family::GaussianScalar) {
    spec.grid = GridShape::square(side);
    spec.scalar_hat = exponential_kernel_response(spec.grid, 0.5);
  } else {
    spec.bank = shared_morlet(side, J, Q);
    if (family == Family::Scattering) spec.pairs = increasing_scale_pairs(*spec.bank, q2_stride);
  }
  if (family == Family::WaveletL1 || family == Family::Scattering) spec.eps_mod = 1e-3;
  return spec;
}

void BM_Fft2d(benchmark::State& state) {
  const auto side = state.range(0);
  const PeriodicSignal x = random_signal(GridShape::square(side), 1);
  for (auto _ : state) benchmark::DoNotOptimize(fft(x));
  state.SetItemsProcessed(state.iterations() * side * side);
}
BENCHMARK(BM_Fft2d)->Arg(64)->Arg(128)->Arg(256);

void BM_BuildMorletBank(benchmark::State& state) {
  const auto side = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(build_morlet_2d(side, 5, 8));
}
BENCHMARK(BM_BuildMorletBank)->Arg(64)->Arg(128);

void BM_BuildGaborBank(benchmark::State& state) {
  const auto d = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(build_gabor_1d(d, 6, 12));
}
BENCHMARK(BM_BuildGaborBank)->Arg(1024)->Arg(4096);

template <Family F>
void BM_EnergyEval(benchmark::State& state) {
  const auto side = state.range(0);
  EnergySpec spec = make_spec(F, side, 5, 8);
  EnergyEvaluator ev(spec);
  const PeriodicSignal x = random_signal(spec.dims(), 2);
  for (auto _ : state) benchmark::DoNotOptimize(ev.eval(x));
}
BENCHMARK(BM_EnergyEval<Family::WaveletL2>)->Arg(64)->Arg(128);
BENCHMARK(BM_EnergyEval<Family::WaveletL1>)->Arg(64)->Arg(128);
BENCHMARK(BM_EnergyEval<Family::Scattering>)->Arg(64)->Arg(128);
BENCHMARK(BM_EnergyEval<Family::IsingQuadratic>)->Arg(64)->Arg(128);
BENCHMARK(BM_EnergyEval<Family::GaussianScalar>)->Arg(64)->Arg(128);

template <Family F>
void BM_EnergyGrad(benchmark::State& state) {
  const auto side = state.range(0);
  EnergySpec spec = make_spec(F, side, 5, 8);
  EnergyEvaluator ev(spec);
  const PeriodicSignal x = random_signal(spec.dims(), 3);
  const EnergyVector y = ev.eval(random_signal(spec.dims(), 4));
  for (auto _ : state) benchmark::DoNotOptimize(ev.grad_objective(x, y));
}
BENCHMARK(BM_EnergyGrad<Family::WaveletL2>)->Arg(64)->Arg(128);
BENCHMARK(BM_EnergyGrad<Family::WaveletL1>)->Arg(64)->Arg(128);
BENCHMARK(BM_EnergyGrad<Family::Scattering>)->Arg(64)->Arg(128);
BENCHMARK(BM_EnergyGrad<Family::IsingQuadratic>)->Arg(64)->Arg(128);
BENCHMARK(BM_EnergyGrad<Family::GaussianScalar>)->Arg(64)->Arg(128);

void BM_DescentSteps(benchmark::State& state) {
  const auto side = state.range(0);
  EnergySpec spec = make_spec(Family::WaveletL2, side, 5, 8);
  const PeriodicSignal xbar = random_signal(spec.dims(), 5);
  const EnergyVector y = eval_phi(xbar, spec);
  const PeriodicSignal x0 = random_signal(spec.dims(), 6);
  DescentConfig cfg;
  cfg.max_iters = 10;
  cfg.eps_rel = 0.0;  // fixed 10-step burst
  cfg.record_trace = false;
  for (auto _ : state) benchmark::DoNotOptimize(descend(x0, y, spec, cfg));
  state.SetItemsProcessed(state.iterations() * cfg.max_iters);
}
BENCHMARK(BM_DescentSteps)->Arg(64)->Arg(128);

void BM_IsingSample(benchmark::State& state) {
  IsingModel model;
  model.n = state.range(0);
  model.temperature = 3.0;
  model.burn_in_sweeps = 200;
  model.thin_sweeps = 0;
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_ising(model, 1, ++seed));
}
BENCHMARK(BM_IsingSample)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_ShotNoiseSample(benchmark::State& state) {
  ShotNoiseModel model;
  model.dims = GridShape::square(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_shot_noise(model, 1, ++seed));
}
BENCHMARK(BM_ShotNoiseSample)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
