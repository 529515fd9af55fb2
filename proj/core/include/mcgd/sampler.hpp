#pragma once

#include <cstdint>
#include <vector>

#include "mcgd/energy.hpp"

namespace mcgd {

// Step size policy for the descent map x -> x - kappa * grad E(x).
struct StepRule {
  enum class Kind { Constant, Decay, Backtracking };
  Kind kind = Kind::Backtracking;
  double kappa0 = 1.0;
  double decay_tau = 100.0;  // Decay: kappa_n = kappa0 / (1 + n / tau)
  double armijo = 1e-4;      // Backtracking acceptance slope
  double shrink = 0.5;
  double grow = 1.3;
  double kappa_max = 1e6;
  int max_backtracks = 60;
};

struct DescentConfig {
  int max_iters = 500;
  StepRule step;
  // Stop once ||Phi(x) - y||_2 <= eps. eps_abs > 0 wins; otherwise
  // eps = eps_rel * ||y||_2. Both zero runs to max_iters.
  double eps_abs = 0.0;
  double eps_rel = 1e-3;
  double divergence_factor = 10.0;  // abort when E > factor * E(x_0)
  bool record_trace = true;
};

// State recorded before each accepted step.
struct IterRecord {
  double objective;  // E(x_n)
  double phi_dist;   // ||Phi(x_n) - y||
  double grad_norm;
  double kappa;
};

struct DescentTrace {
  std::vector<IterRecord> iters;
  int iters_used = 0;
  bool converged = false;
  bool stalled = false;  // line search could not make progress
  double eps_abs = 0.0;
  double final_phi_dist = 0.0;
  double final_objective = 0.0;
  double init_mean = 0.0;  // white-noise init moments (set by synthesize)
  double init_sigma2 = 0.0;
};

struct DescentResult {
  PeriodicSignal x;
  DescentTrace trace;
};

double resolve_eps(const DescentConfig& cfg, const EnergyVector& y);

// Gradient descent on E(x) = 1/2 ||Phi(x) - y||^2. Throws NumericError when
// the objective becomes non-finite or exceeds divergence_factor * E(x_0).
DescentResult descend(const PeriodicSignal& x0, const EnergyVector& y, const EnergySpec& spec,
                      const DescentConfig& cfg);

// Gaussian i.i.d. initializations matching the empirical mean and variance
// of the observed realization. Deterministic per (seed, sample index).
std::vector<PeriodicSignal> init_white_noise(const PeriodicSignal& xbar, int count,
                                             std::uint64_t seed);

struct SynthesisResult {
  EnergyVector target;
  double eps_abs = 0.0;
  std::vector<PeriodicSignal> samples;
  std::vector<DescentTrace> traces;
};

// Full model sampler: target energy from one realization, white-noise
// initializations, independent descents (batched across workers).
SynthesisResult synthesize(const PeriodicSignal& xbar, const EnergySpec& spec, int count,
                           const DescentConfig& cfg, std::uint64_t seed);

// Runs the same descent from x0 and from translate(x0) and returns
// max_u |descend(translate(x0)) - translate(descend(x0))|.
double check_shift_equivariance(const PeriodicSignal& x0, std::int64_t dr, std::int64_t dc,
                                const EnergyVector& y, const EnergySpec& spec,
                                const DescentConfig& cfg);

}  // namespace mcgd
