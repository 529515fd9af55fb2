#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mcgd/energy.hpp"
#include "mcgd/grid.hpp"
#include "mcgd/processes.hpp"
#include "mcgd/sampler.hpp"

namespace mcgd {

// Concentration of an energy vector over a sample batch:
//   sigma2 = E||Phi - E Phi||^2 / E||Phi||^2
// with expectations replaced by sample means and the numerator in unbiased
// (N-1) form. per_slot holds each descriptor's share; they sum to sigma2.
struct ConcentrationReport {
  double sigma2 = 0.0;
  std::vector<double> per_slot;
  std::vector<double> mean_phi;
  int count = 0;
  std::string spec_label;
};

// Model error of a batch against a fixed reference mean (the ground-truth
// E_mu Phi^mu): e2 = E||Phi - ref||^2 / E||Phi||^2, numerator in the same
// (N-1) form so that e2 == sigma2 when ref is the batch's own mean.
struct ModelErrorReport {
  double e2 = 0.0;
  std::vector<double> per_slot;
  int count = 0;
  std::string reference_label;
};

ConcentrationReport normalized_variance(const std::vector<std::vector<double>>& phis,
                                        const std::string& spec_label = {});
ModelErrorReport model_error(const std::vector<std::vector<double>>& phis,
                             const std::vector<double>& reference_mean,
                             const std::string& reference_label = {});

// Convenience: evaluate spec on every sample, then reduce.
std::vector<std::vector<double>> eval_batch(const std::vector<PeriodicSignal>& samples,
                                            const EnergySpec& spec);

// Averaged periodogram P(w) = mean_i d^-1 |xhat_i(w)|^2.
SpectralModel estimate_spectrum(const std::vector<PeriodicSignal>& samples);

// Averages of a spectrum over dyadic annuli: output entry s covers folded
// frequencies with n/2^{s+2} < |w| <= n/2^{s+1} (sup norm in 2-D), from the
// outermost shell down to |w| = 1; the DC bin is excluded.
std::vector<double> annulus_averages(const SpectralModel& spectrum);

// Differential entropy rate (nats per sample) of an i.i.d. Gaussian field:
// 0.5 log(2 pi e sigma2).
double gaussian_entropy_rate(double sigma2);

// Per-iteration lower bound on the model's entropy rate along a descent:
//   b_m = h0_rate - (1 - K/d) eta sum_{n<m} kappa_n r_n - (K/d) beta^2 sum_{n<m} kappa_n
// where r_n = ||Phi(x_n) - y|| and kappa_n are read from the trace. Returns
// iters_used + 1 values; b_0 = h0_rate. beta bounds ||J Phi|| and eta the
// descent alignment; both must be positive (estimated or assumed).
std::vector<double> entropy_lower_bound(const DescentTrace& trace, double h0_rate, double beta,
                                        double eta, std::int64_t K, std::int64_t d);

// Entropy-rate shift (K/d) log(eps / eps_prime) between two set thicknesses.
double epsilon_entropy_shift(std::int64_t K, std::int64_t d, double eps, double eps_prime);

// Empirical estimate of beta = ||J Phi(x)||_2 (largest singular value) by
// power iteration on J^T J; directional derivatives by central differences.
double estimate_jacobian_norm(const EnergySpec& spec, const PeriodicSignal& x, int iters = 30,
                              double fd_step = 1e-5, std::uint64_t seed = 17);

// Plain-text summary table: one row per metric, one column per spec.
std::string format_table(const std::string& title, const std::vector<std::string>& row_labels,
                         const std::vector<std::string>& col_labels,
                         const std::vector<std::vector<double>>& cells);

}  // namespace mcgd
