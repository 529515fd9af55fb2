#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mcgd/energy.hpp"
#include "mcgd/processes.hpp"
#include "mcgd/sampler.hpp"

namespace mcgd {

// JSON configuration parsers. Each takes the serialized JSON object text so
// callers may embed these blocks inside larger experiment files. Unknown
// keys are rejected (fail fast, before any compute starts); all errors are
// reported as ConfigError with the offending key.

// {"family": "wavelet-l2"|"wavelet-l1"|"scattering"|"ising-quadratic"|"gaussian-scalar",
//  "bank": {"type": "morlet2d"|"gabor1d"|"shannon", "J": 5, "Q": 8} | {"file": "x.mbnk"},
//  "scalar": {"kernel": "exponential", "xi": 0.5},
//  "pairs": {"policy": "increasing"|"all", "q2_stride": 1} | {"list": [[j1,q1,j2,q2], ...]},
//  "include_l2x": false, "include_l1x": false, "include_mean": false,
//  "eps_mod": 0.0}
// `dims` is the grid the spec will be evaluated on (taken from the input
// signal or generator); banks are built for or checked against it.
EnergySpec parse_energy_spec(const std::string& json_text, GridShape dims);

// {"max_iters": 500, "eps_abs": 0, "eps_rel": 1e-3, "divergence_factor": 10,
//  "record_trace": true,
//  "step": {"rule": "backtracking"|"constant"|"decay", "kappa0": 1.0, "decay_tau": 100,
//           "armijo": 1e-4, "shrink": 0.5, "grow": 1.3, "kappa_max": 1e6,
//           "max_backtracks": 60}}
DescentConfig parse_descent_config(const std::string& json_text);

// Ground-truth generator configuration:
//  {"model": "gaussian-spectral", "side": 128, "rank": 2, "xi": 0.5}
//  {"model": "ising", "side": 64, "temperature": 3.0, "burn_in_sweeps": 1500,
//   "thin_sweeps": 30, "algo": "auto"|"metropolis"|"wolff", "fix_sector": true}
//  {"model": "cox-shot-noise", "side": 128, "mean_rate": 0.05, "rate_std": 0.03,
//   "corr_cols": 100, "corr_rows": 4}
struct GeneratorConfig {
  enum class Kind { GaussianSpectral, Ising, ShotNoise };
  Kind kind = Kind::GaussianSpectral;
  SpectralModel spectral;
  IsingModel ising;
  ShotNoiseModel shot;

  GridShape dims() const;
};
GeneratorConfig parse_generator_config(const std::string& json_text);

std::vector<PeriodicSignal> run_generator(const GeneratorConfig& gen, int count,
                                          std::uint64_t seed);

}  // namespace mcgd
