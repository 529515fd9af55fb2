#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <memory>
#include <vector>

#include "mcgd/energy.hpp"
#include "mcgd/filters.hpp"
#include "mcgd/grid.hpp"
#include "mcgd/rng.hpp"

using namespace mcgd;

namespace {

PeriodicSignal random_signal(GridShape s, std::uint64_t seed) {
  PeriodicSignal x(s);
  Rng rng(seed);
  for (auto& v : x.v) v = rng.gaussian();
  return x;
}

// Relative l2 error between the analytic gradient of E = 1/2 ||Phi(x)-y||^2
// and a full coordinate-wise central difference.
double grad_fd_rel_error(const EnergySpec& spec, const PeriodicSignal& x, const EnergyVector& y,
                         double h) {
  EnergyEvaluator ev(spec);
  const PeriodicSignal g = ev.grad_objective(x, y).grad;

  PeriodicSignal xp = x, xm = x;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.v.size(); ++i) {
    xp.v[i] = x.v[i] + h;
    xm.v[i] = x.v[i] - h;
    const double fp = ev.objective(xp, y);
    const double fm = ev.objective(xm, y);
    const double fd = (fp - fm) / (2.0 * h);
    num += (fd - g.v[i]) * (fd - g.v[i]);
    den += g.v[i] * g.v[i];
    xp.v[i] = x.v[i];
    xm.v[i] = x.v[i];
  }
  REQUIRE(den > 0.0);
  return std::sqrt(num / den);
}

EnergyVector target_for(const EnergySpec& spec, std::uint64_t seed) {
  return eval_phi(random_signal(spec.dims(), seed), spec);
}

}  // namespace

TEST_CASE("wavelet l2 gradient matches central differences") {
  EnergySpec spec;
  spec.family = Family::WaveletL2;
  spec.bank = std::make_shared<FilterBank>(build_morlet_2d(8, 2, 2));
  spec.include_l2x = true;
  spec.include_mean = true;
  const PeriodicSignal x = random_signal(spec.dims(), 1);
  CHECK(grad_fd_rel_error(spec, x, target_for(spec, 2), 1e-6) <= 1e-5);
}

TEST_CASE("wavelet l1 gradient matches central differences") {
  EnergySpec spec;
  spec.family = Family::WaveletL1;
  spec.bank = std::make_shared<FilterBank>(build_gabor_1d(16, 2, 1));
  spec.eps_mod = 1e-3;
  const PeriodicSignal x = random_signal(spec.dims(), 3);
  CHECK(grad_fd_rel_error(spec, x, target_for(spec, 4), 1e-6) <= 1e-5);
}

TEST_CASE("scattering gradient matches central differences") {
  EnergySpec spec;
  spec.family = Family::Scattering;
  spec.bank = std::make_shared<FilterBank>(build_gabor_1d(16, 2, 1));
  spec.pairs = increasing_scale_pairs(*spec.bank);
  spec.eps_mod = 1e-3;
  spec.include_l1x = true;
  const PeriodicSignal x = random_signal(spec.dims(), 5);
  CHECK(grad_fd_rel_error(spec, x, target_for(spec, 6), 1e-6) <= 1e-5);
}

TEST_CASE("scattering gradient with 2-d bank and all pairs") {
  EnergySpec spec;
  spec.family = Family::Scattering;
  spec.bank = std::make_shared<FilterBank>(build_morlet_2d(8, 2, 2));
  spec.pairs = all_scale_pairs(*spec.bank);
  spec.eps_mod = 1e-3;
  const PeriodicSignal x = random_signal(spec.dims(), 7);
  CHECK(grad_fd_rel_error(spec, x, target_for(spec, 8), 1e-6) <= 1e-5);
}

TEST_CASE("ising quadratic gradient matches central differences") {
  EnergySpec spec;
  spec.family = Family::IsingQuadratic;
  spec.grid = GridShape::square(4);
  const PeriodicSignal x = random_signal(spec.dims(), 9);
  CHECK(grad_fd_rel_error(spec, x, target_for(spec, 10), 1e-6) <= 1e-5);
}

TEST_CASE("gaussian scalar gradient matches central differences") {
  EnergySpec spec;
  spec.family = Family::GaussianScalar;
  spec.scalar_hat = fft(random_signal(GridShape::line(16), 11));
  const PeriodicSignal x = random_signal(spec.dims(), 12);
  CHECK(grad_fd_rel_error(spec, x, target_for(spec, 13), 1e-6) <= 1e-5);
}

TEST_CASE("gradient is real even for strongly asymmetric spectra") {
  // A complex analytic band has no conjugate-symmetric spectrum; the
  // evaluator must still produce a purely real gradient signal.
  EnergySpec spec;
  spec.family = Family::WaveletL1;
  spec.bank = std::make_shared<FilterBank>(build_gabor_1d(32, 3, 1));
  spec.eps_mod = 1e-3;
  const PeriodicSignal x = random_signal(spec.dims(), 14);
  const EnergyVector y = target_for(spec, 15);
  EnergyEvaluator ev(spec);
  const auto res = ev.grad_objective(x, y);
  for (double v : res.grad.v) CHECK(std::isfinite(v));
  CHECK(res.objective == doctest::Approx(ev.objective(x, y)).epsilon(1e-12));
}

TEST_CASE("weighted gradient is linear in the weights") {
  EnergySpec spec;
  spec.family = Family::Scattering;
  spec.bank = std::make_shared<FilterBank>(build_gabor_1d(16, 2, 1));
  spec.pairs = increasing_scale_pairs(*spec.bank);
  spec.eps_mod = 1e-3;
  EnergyEvaluator ev(spec);
  const PeriodicSignal x = random_signal(spec.dims(), 16);

  Rng rng(17);
  std::vector<double> w1(spec.size()), w2(spec.size()), w12(spec.size());
  for (std::size_t i = 0; i < w1.size(); ++i) {
    w1[i] = rng.gaussian();
    w2[i] = rng.gaussian();
    w12[i] = 2.0 * w1[i] - 3.0 * w2[i];
  }
  const PeriodicSignal g1 = ev.grad_weighted(x, w1);
  const PeriodicSignal g2 = ev.grad_weighted(x, w2);
  const PeriodicSignal g12 = ev.grad_weighted(x, w12);
  for (std::size_t i = 0; i < g1.v.size(); ++i)
    CHECK(g12.v[i] == doctest::Approx(2.0 * g1.v[i] - 3.0 * g2.v[i]).epsilon(1e-10));
}

TEST_CASE("objective gradient equals the weighted gradient at the residual") {
  EnergySpec spec;
  spec.family = Family::WaveletL1;
  spec.bank = std::make_shared<FilterBank>(build_gabor_1d(16, 2, 1));
  spec.eps_mod = 1e-3;
  EnergyEvaluator ev(spec);
  const PeriodicSignal x = random_signal(spec.dims(), 18);
  const EnergyVector y = target_for(spec, 19);

  const auto res = ev.grad_objective(x, y);
  std::vector<double> w(res.phi.values.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = res.phi.values[i] - y.values[i];
  const PeriodicSignal g = ev.grad_weighted(x, w);
  for (std::size_t i = 0; i < g.v.size(); ++i)
    CHECK(g.v[i] == doctest::Approx(res.grad.v[i]).epsilon(1e-10));
}
