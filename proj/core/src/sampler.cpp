#include "mcgd/sampler.hpp"

#include <cmath>
#include <string>

#include "mcgd/parallel.hpp"
#include "mcgd/rng.hpp"

namespace mcgd {

double resolve_eps(const DescentConfig& cfg, const EnergyVector& y) {
  if (cfg.eps_abs > 0.0) return cfg.eps_abs;
  if (cfg.eps_rel > 0.0) return cfg.eps_rel * std::sqrt(l2_norm_sq(y.values));
  return 0.0;
}

DescentResult descend(const PeriodicSignal& x0, const EnergyVector& y, const EnergySpec& spec,
                      const DescentConfig& cfg) {
  if (cfg.max_iters < 0) throw ConfigError("max_iters must be >= 0");
  EnergyEvaluator ev(spec);

  DescentResult out;
  out.x = x0;
  DescentTrace& tr = out.trace;
  tr.eps_abs = resolve_eps(cfg, y);

  double kappa = cfg.step.kappa0;
  double e_init = -1.0;
  PeriodicSignal trial;

  for (int n = 0; n < cfg.max_iters; ++n) {
    EnergyEvaluator::GradResult g = ev.grad_objective(out.x, y);
    const double dist = std::sqrt(2.0 * g.objective);
    if (!std::isfinite(g.objective))
      throw NumericError("objective is not finite at iteration " + std::to_string(n), n);
    if (e_init < 0.0) e_init = g.objective;
    if (dist <= tr.eps_abs) {
      tr.converged = true;
      tr.final_phi_dist = dist;
      tr.final_objective = g.objective;
      return out;
    }
    if (g.objective > cfg.divergence_factor * e_init && n > 0)
      throw NumericError("descent diverged at iteration " + std::to_string(n) +
                             " (objective " + std::to_string(g.objective) + " vs initial " +
                             std::to_string(e_init) + ")",
                         n);

    const double gn2 = l2_norm_sq(g.grad.v);
    if (gn2 == 0.0) {
      tr.stalled = true;
      tr.final_phi_dist = dist;
      tr.final_objective = g.objective;
      return out;
    }

    double used = kappa;
    switch (cfg.step.kind) {
      case StepRule::Kind::Constant:
        used = cfg.step.kappa0;
        for (std::size_t i = 0; i < out.x.v.size(); ++i) out.x.v[i] -= used * g.grad.v[i];
        break;
      case StepRule::Kind::Decay:
        used = cfg.step.kappa0 / (1.0 + static_cast<double>(n) / cfg.step.decay_tau);
        for (std::size_t i = 0; i < out.x.v.size(); ++i) out.x.v[i] -= used * g.grad.v[i];
        break;
      case StepRule::Kind::Backtracking: {
        used = std::min(kappa * cfg.step.grow, cfg.step.kappa_max);
        bool accepted = false;
        for (int t = 0; t <= cfg.step.max_backtracks; ++t) {
          trial.shape = out.x.shape;
          trial.v.resize(out.x.v.size());
          for (std::size_t i = 0; i < out.x.v.size(); ++i)
            trial.v[i] = out.x.v[i] - used * g.grad.v[i];
          const double e_try = ev.objective(trial, y);
          if (std::isfinite(e_try) && e_try <= g.objective - cfg.step.armijo * used * gn2) {
            accepted = true;
            break;
          }
          used *= cfg.step.shrink;
        }
        if (!accepted) {
          tr.stalled = true;
          tr.final_phi_dist = dist;
          tr.final_objective = g.objective;
          return out;
        }
        kappa = used;
        out.x.v.swap(trial.v);
        break;
      }
    }

    if (cfg.record_trace)
      tr.iters.push_back(IterRecord{g.objective, dist, std::sqrt(gn2), used});
    tr.iters_used = n + 1;
  }

  const double e_final = ev.objective(out.x, y);
  tr.final_objective = e_final;
  tr.final_phi_dist = std::sqrt(2.0 * e_final);
  tr.converged = tr.final_phi_dist <= tr.eps_abs;
  return out;
}

std::vector<PeriodicSignal> init_white_noise(const PeriodicSignal& xbar, int count,
                                             std::uint64_t seed) {
  if (count < 0) throw ConfigError("sample count must be >= 0");
  const double m0 = mean(xbar.v);
  double s2 = 0.0;
  for (double v : xbar.v) s2 += (v - m0) * (v - m0);
  s2 /= static_cast<double>(xbar.v.size());
  const double s0 = std::sqrt(s2);

  std::vector<PeriodicSignal> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    Rng rng(seed, static_cast<std::uint64_t>(i));
    PeriodicSignal x(xbar.shape);
    for (auto& v : x.v) v = m0 + s0 * rng.gaussian();
    out[static_cast<std::size_t>(i)] = std::move(x);
  }
  return out;
}

SynthesisResult synthesize(const PeriodicSignal& xbar, const EnergySpec& spec, int count,
                           const DescentConfig& cfg, std::uint64_t seed) {
  SynthesisResult out;
  out.target = eval_phi(xbar, spec);
  out.eps_abs = resolve_eps(cfg, out.target);

  std::vector<PeriodicSignal> inits = init_white_noise(xbar, count, seed);
  const double m0 = mean(xbar.v);
  double s2 = 0.0;
  for (double v : xbar.v) s2 += (v - m0) * (v - m0);
  s2 /= static_cast<double>(xbar.v.size());

  out.samples.resize(inits.size());
  out.traces.resize(inits.size());
  parallel_for(inits.size(), [&](std::size_t i) {
    DescentResult r = descend(inits[i], out.target, spec, cfg);
    r.trace.init_mean = m0;
    r.trace.init_sigma2 = s2;
    out.samples[i] = std::move(r.x);
    out.traces[i] = std::move(r.trace);
  });
  return out;
}

double check_shift_equivariance(const PeriodicSignal& x0, std::int64_t dr, std::int64_t dc,
                                const EnergyVector& y, const EnergySpec& spec,
                                const DescentConfig& cfg) {
  DescentResult base = descend(x0, y, spec, cfg);
  DescentResult shifted = descend(translate(x0, dr, dc), y, spec, cfg);
  PeriodicSignal expected = translate(base.x, dr, dc);
  double m = 0.0;
  for (std::size_t i = 0; i < expected.v.size(); ++i)
    m = std::max(m, std::fabs(shifted.x.v[i] - expected.v[i]));
  return m;
}

}  // namespace mcgd
