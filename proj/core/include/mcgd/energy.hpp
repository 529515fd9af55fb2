#pragma once

#include <memory>
#include <string>
#include <vector>

#include "mcgd/filters.hpp"
#include "mcgd/grid.hpp"

namespace mcgd {

// Descriptor families. Every descriptor is a spatial average over the grid
// (value per unit point count), so values are comparable across sizes.
enum class Family {
  WaveletL2,       // d^-1 ||x * psi_jq||_2^2 per band
  WaveletL1,       // d^-1 ||x * psi_jq||_1 per band
  Scattering,      // first-order d^-1 ||x * psi_a||_1 plus listed
                   // second-order d^-1 || |x * psi_a| * psi_b ||_1 pairs
  IsingQuadratic,  // d^-1 sum_u sum_{u' in N_u} x(u) x(u'), N_u = axis neighbors
  GaussianScalar,  // d^-1 ||x * h||_2^2 for one fixed filter h
};

struct ScatPair {
  int j1 = 0, q1 = 0;  // first-order band
  int j2 = 0, q2 = 0;  // second-order band
};

// Ordered descriptor set. Optional point-wise descriptors (d^-1 ||x||_2^2,
// d^-1 ||x||_1, d^-1 sum x) come first, then the family core in canonical
// order. include_lowpass appends the psi_{J,0} channel after the first-order
// bands (l^2 for WaveletL2, l^1 otherwise), closing the frequency cover below
// the coarsest band. eps_mod > 0 replaces |z| with sqrt(|z|^2 + eps^2) - eps
// everywhere, making the energy differentiable; eps_mod = 0 keeps the exact
// modulus.
struct EnergySpec {
  Family family = Family::WaveletL2;
  std::shared_ptr<const FilterBank> bank;  // wavelet families
  ComplexField scalar_hat;                 // GaussianScalar response
  GridShape grid;                          // required when no filter fixes it
  bool include_l2x = false;
  bool include_l1x = false;
  bool include_mean = false;
  bool include_lowpass = false;            // wavelet families only
  std::vector<ScatPair> pairs;             // Scattering second order
  double eps_mod = 0.0;

  GridShape dims() const;
  std::size_t size() const;  // descriptor count K
  std::vector<std::string> make_labels() const;
  void validate() const;
};

// Second-order pair policies. `increasing` keeps j2 > j1 (all orientation
// pairs, optionally thinned by taking every q2_stride-th q2); `all` keeps
// the full (JQ)^2 set.
std::vector<ScatPair> increasing_scale_pairs(const FilterBank& bank, int q2_stride = 1);
std::vector<ScatPair> all_scale_pairs(const FilterBank& bank);

// Energy vector Phi(x) with stable labels shared across evaluations.
struct EnergyVector {
  std::vector<double> values;
  std::shared_ptr<const std::vector<std::string>> labels;
};

// Evaluates Phi, the objective E = 1/2 ||Phi(x) - y||^2, and its gradient.
// Gradients are analytic (real projections of complex correlations) and are
// accumulated in the frequency domain with one final inverse transform.
// Not thread safe: use one evaluator per thread.
class EnergyEvaluator {
 public:
  explicit EnergyEvaluator(EnergySpec spec);

  const EnergySpec& spec() const { return spec_; }
  const std::shared_ptr<const std::vector<std::string>>& labels() const { return labels_; }

  EnergyVector eval(const PeriodicSignal& x);
  double objective(const PeriodicSignal& x, const EnergyVector& y);

  struct GradResult {
    PeriodicSignal grad;
    EnergyVector phi;
    double objective = 0.0;
  };
  // grad of E(x) = 1/2 ||Phi(x) - y||^2, i.e. JPhi(x)^T (Phi(x) - y).
  GradResult grad_objective(const PeriodicSignal& x, const EnergyVector& y);
  // sum_k w_k grad Phi_k(x); used for Jacobian-norm power iteration.
  PeriodicSignal grad_weighted(const PeriodicSignal& x, const std::vector<double>& w);

 private:
  enum class Mode { Eval, GradResidual, GradWeighted };
  void run_pass(const PeriodicSignal& x, Mode mode, const EnergyVector* y,
                const std::vector<double>* w, EnergyVector& phi, PeriodicSignal* grad);

  EnergySpec spec_;
  std::shared_ptr<const std::vector<std::string>> labels_;
  std::vector<std::vector<std::pair<int, std::size_t>>> pair_groups_;  // band idx -> (band2, slot)
  bool l2_symmetric_ = false;  // all quadratic filters have symmetric spectra

  // scratch
  ComplexField X_, c1_, m1hat_, work_, Hacc_, Gacc_;
  std::vector<double> Wacc_, nbr_;
};

EnergyVector eval_phi(const PeriodicSignal& x, const EnergySpec& spec);
double eval_objective(const PeriodicSignal& x, const EnergyVector& y, const EnergySpec& spec);
PeriodicSignal grad_objective(const PeriodicSignal& x, const EnergyVector& y,
                              const EnergySpec& spec);

}  // namespace mcgd
