#pragma once

#include <string>
#include <vector>

#include "mcgd/grid.hpp"

namespace mcgd {

enum class BankKind { Morlet2d, Gabor1d, Shannon };

// Band-pass wavelet at octave j (1 = finest) and orientation / sub-octave
// position q, stored as its frequency response on the full grid.
struct BandFilter {
  int j = 0;
  int q = 0;
  ComplexField hat;
};

// Multiscale filter bank: J*Q zero-mean band-pass filters plus one low-pass.
// `gamma` is the measured Littlewood-Paley deviation max_w |S(w) - 1| with
// S(w) = |phi(w)|^2 + 1/2 sum_{j,q} (|psi_jq(w)|^2 + |psi_jq(-w)|^2).
struct FilterBank {
  BankKind kind = BankKind::Shannon;
  GridShape dims;
  int J = 0;
  int Q = 1;
  std::vector<BandFilter> bands;  // ordered by j ascending, then q ascending
  ComplexField low_pass;
  double gamma = 1.0;

  int band_index(int j, int q) const;
  const ComplexField& band_hat(int j, int q) const;
  void validate() const;
};

// 2-D Morlet bank on an n x n grid: Q orientations over [0, pi), dyadic
// scales j = 1..J, spectra built by alias summation and made exactly
// zero-mean by subtracting a matched Gaussian. Band amplitudes are scaled
// by a single factor chosen to minimize the Littlewood-Paley deviation.
FilterBank build_morlet_2d(std::int64_t n, int J, int Q);

// 1-D Gabor bank on d points: Q filters per octave, octaves j = 1..J; the
// (j, q) filter is centered in [pi 2^{-j+q/Q}, pi 2^{-j+(q+1)/Q}].
FilterBank build_gabor_1d(std::int64_t d, int J, int Q);

// Exact dyadic indicator partition (rank 1 or 2). Requires a power-of-two
// side and J = log2(side); the low-pass keeps only the zero frequency, so
// the Littlewood-Paley sum is identically 1 (gamma = 0).
FilterBank build_shannon_bank(GridShape dims, int J);

// S(w) per frequency, and its max deviation from 1.
std::vector<double> littlewood_paley_sum(const FilterBank& bank);
double littlewood_paley_gamma(const FilterBank& bank);

// Spatial filter (inverse DFT of the stored spectrum).
ComplexField spatial_taps(const ComplexField& hat);

}  // namespace mcgd
