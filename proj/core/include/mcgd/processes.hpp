#pragma once

#include <cstdint>
#include <vector>

#include "mcgd/grid.hpp"

namespace mcgd {

// Power spectrum P(w) = expected averaged periodogram d^-1 E|xhat(w)|^2.
struct SpectralModel {
  GridShape dims;
  std::vector<double> power;
};

// Stationary Gaussian model whose spectrum is the inverse squared response
// of a periodized exponential kernel h(u) = c * exp(-|u| / xi); c is chosen
// so the field has unit variance. The response must stay strictly positive.
SpectralModel exponential_kernel_spectrum(GridShape dims, double xi);

// Frequency response of the periodized exponential kernel itself.
ComplexField exponential_kernel_response(GridShape dims, double xi);

// Kernel with a squared-Lorentzian frequency profile:
// |hhat(w)|^2 = c^2 sum_m (xi^2 + |w + 2 pi m|^2)^-2 with aliases summed
// over the integer lattice; xi is the half-width in radians. The model
// spectrum 1/|hhat|^2 grows like |w|^4 past xi and has unit mean. Flatter
// than the exponential kernel near w = 0 and steeper near the Nyquist edge.
SpectralModel lorentzian_kernel_spectrum(GridShape dims, double xi);
ComplexField lorentzian_kernel_response(GridShape dims, double xi);

// Circular synthesis: white Gaussian noise shaped by sqrt(P).
std::vector<PeriodicSignal> sample_spectral_gaussian(const SpectralModel& model, int count,
                                                     std::uint64_t seed);

// Ferromagnetic Ising model on the periodic grid, p(x) ~ exp(sum_<uu'> x x' / T)
// with each bond counted once; the critical temperature is ~2.269.
struct IsingModel {
  std::int64_t n = 64;
  double temperature = 3.0;
  int burn_in_sweeps = 1500;
  int thin_sweeps = 30;  // extra decorrelation sweeps (chains are independent anyway)
  enum class Algo { Metropolis, Wolff, Auto } algo = Algo::Auto;
  // Below T_c, flip each sample into the non-negative magnetization sector.
  bool fix_sector = true;
};

std::vector<PeriodicSignal> sample_ising(const IsingModel& model, int count, std::uint64_t seed);

// Energy per site with each bond counted once (standard Hamiltonian sign).
double ising_energy_per_site(const PeriodicSignal& x);

// Cox shot noise: a clipped Gaussian rate field with anisotropic correlation
// drives per-pixel Poisson counts, convolved with a compact zero-mean kernel.
struct ShotNoiseModel {
  GridShape dims;
  double mean_rate = 0.05;
  double rate_std = 0.03;
  double corr_cols = 100.0;  // correlation length along columns (horizontal)
  double corr_rows = 4.0;    // correlation length along rows (vertical)
  FilterTaps kernel;         // empty -> default 5x5 zero-mean bump
};

FilterTaps default_shot_noise_kernel();
std::vector<PeriodicSignal> sample_shot_noise(const ShotNoiseModel& model, int count,
                                              std::uint64_t seed);
// The rate field alone (used by correlation-length diagnostics).
PeriodicSignal sample_shot_noise_rate(const ShotNoiseModel& model, std::uint64_t seed,
                                      std::uint64_t stream);

}  // namespace mcgd
