#include "mcgd/stats.hpp"

#include <cmath>
#include <cstdio>

#include "mcgd/parallel.hpp"
#include "mcgd/rng.hpp"

namespace mcgd {
namespace {

constexpr double kPi = 3.14159265358979323846;

void check_batch(const std::vector<std::vector<double>>& phis) {
  if (phis.size() < 2) throw ConfigError("need at least 2 samples");
  const std::size_t K = phis[0].size();
  if (K == 0) throw ConfigError("empty energy vectors");
  for (const auto& p : phis)
    if (p.size() != K) throw ConfigError("energy vectors have mixed sizes");
}

// Mean per slot and the shared denominator N^-1 sum_i ||phi_i||^2.
double batch_moments(const std::vector<std::vector<double>>& phis, std::vector<double>& mean) {
  const std::size_t N = phis.size(), K = phis[0].size();
  mean.assign(K, 0.0);
  double denom = 0.0, comp = 0.0;
  for (const auto& p : phis) {
    for (std::size_t k = 0; k < K; ++k) {
      mean[k] += p[k];
      const double t = p[k] * p[k] - comp;
      const double s = denom + t;
      comp = (s - denom) - t;
      denom = s;
    }
  }
  for (auto& m : mean) m /= static_cast<double>(N);
  denom /= static_cast<double>(N);
  if (denom <= 0.0) throw ConfigError("all energies are zero: normalized variance undefined");
  return denom;
}

std::vector<double> centered_second_moment(const std::vector<std::vector<double>>& phis,
                                           const std::vector<double>& center) {
  const std::size_t N = phis.size(), K = phis[0].size();
  std::vector<double> num(K, 0.0);
  for (const auto& p : phis)
    for (std::size_t k = 0; k < K; ++k) {
      const double dlt = p[k] - center[k];
      num[k] += dlt * dlt;
    }
  for (auto& v : num) v /= static_cast<double>(N - 1);
  return num;
}

}  // namespace

ConcentrationReport normalized_variance(const std::vector<std::vector<double>>& phis,
                                        const std::string& spec_label) {
  check_batch(phis);
  ConcentrationReport rep;
  rep.count = static_cast<int>(phis.size());
  rep.spec_label = spec_label;
  const double denom = batch_moments(phis, rep.mean_phi);
  rep.per_slot = centered_second_moment(phis, rep.mean_phi);
  double total = 0.0;
  for (auto& v : rep.per_slot) {
    v /= denom;
    total += v;
  }
  rep.sigma2 = total;
  return rep;
}

ModelErrorReport model_error(const std::vector<std::vector<double>>& phis,
                             const std::vector<double>& reference_mean,
                             const std::string& reference_label) {
  check_batch(phis);
  if (reference_mean.size() != phis[0].size())
    throw ConfigError("reference mean size does not match energy vectors");
  ModelErrorReport rep;
  rep.count = static_cast<int>(phis.size());
  rep.reference_label = reference_label;
  std::vector<double> mean;
  const double denom = batch_moments(phis, mean);
  rep.per_slot = centered_second_moment(phis, reference_mean);
  double total = 0.0;
  for (auto& v : rep.per_slot) {
    v /= denom;
    total += v;
  }
  rep.e2 = total;
  return rep;
}

std::vector<std::vector<double>> eval_batch(const std::vector<PeriodicSignal>& samples,
                                            const EnergySpec& spec) {
  std::vector<std::vector<double>> out(samples.size());
  parallel_for(samples.size(), [&](std::size_t i) {
    EnergyEvaluator ev(spec);  // evaluators are not shareable across threads
    out[i] = ev.eval(samples[i]).values;
  });
  return out;
}

SpectralModel estimate_spectrum(const std::vector<PeriodicSignal>& samples) {
  if (samples.empty()) throw ConfigError("need at least 1 sample");
  const GridShape dims = samples[0].shape;
  dims.validate();
  SpectralModel model;
  model.dims = dims;
  model.power.assign(static_cast<std::size_t>(dims.count()), 0.0);
  const double invd = 1.0 / static_cast<double>(dims.count());
  for (const auto& x : samples) {
    if (x.shape != dims) throw ConfigError("samples have mixed shapes");
    ComplexField X = fft(x);
    for (std::size_t i = 0; i < model.power.size(); ++i)
      model.power[i] += invd * std::norm(X.v[i]);
  }
  for (auto& p : model.power) p /= static_cast<double>(samples.size());
  return model;
}

std::vector<double> annulus_averages(const SpectralModel& spectrum) {
  const GridShape& dims = spectrum.dims;
  dims.validate();
  if (spectrum.power.size() != static_cast<std::size_t>(dims.count()))
    throw ConfigError("spectrum size mismatch");
  const std::int64_t n = dims.cols;

  auto shell_of = [n](std::int64_t mag) {
    std::int64_t j = 0;
    while (2 * mag <= (n >> j)) ++j;
    return j - 1;  // 0-based, outermost (n/4, n/2] first
  };
  const std::int64_t shells = shell_of(1) + 1;
  std::vector<double> sums(static_cast<std::size_t>(shells), 0.0);
  std::vector<std::int64_t> counts(static_cast<std::size_t>(shells), 0);

  for (std::int64_t r = 0; r < dims.rows; ++r) {
    const std::int64_t fr = std::min(r, dims.rows - r);
    for (std::int64_t c = 0; c < dims.cols; ++c) {
      const std::int64_t fc = std::min(c, dims.cols - c);
      const std::int64_t mag = dims.rank == 1 ? fc : std::max(fr, fc);
      if (mag == 0) continue;  // DC excluded
      const std::int64_t s = shell_of(mag);
      sums[static_cast<std::size_t>(s)] += spectrum.power[static_cast<std::size_t>(r * dims.cols + c)];
      counts[static_cast<std::size_t>(s)] += 1;
    }
  }
  std::vector<double> avg(sums.size(), 0.0);
  for (std::size_t s = 0; s < sums.size(); ++s)
    avg[s] = counts[s] > 0 ? sums[s] / static_cast<double>(counts[s]) : 0.0;
  return avg;
}

double gaussian_entropy_rate(double sigma2) {
  if (sigma2 <= 0.0) throw ConfigError("variance must be positive");
  return 0.5 * std::log(2.0 * kPi * std::exp(1.0) * sigma2);
}

std::vector<double> entropy_lower_bound(const DescentTrace& trace, double h0_rate, double beta,
                                        double eta, std::int64_t K, std::int64_t d) {
  if (beta <= 0.0 || eta <= 0.0) throw ConfigError("beta and eta must be positive");
  if (K < 1 || d < 1) throw ConfigError("K and d must be positive");
  if (static_cast<int>(trace.iters.size()) < trace.iters_used)
    throw ConfigError("trace does not record per-iteration data");

  const double ratio = static_cast<double>(K) / static_cast<double>(d);
  const double a1 = (1.0 - ratio) * eta;
  const double a2 = ratio * beta * beta;

  std::vector<double> bound;
  bound.reserve(trace.iters.size() + 1);
  bound.push_back(h0_rate);
  double s1 = 0.0, s2 = 0.0;
  for (const auto& rec : trace.iters) {
    if (!std::isfinite(rec.kappa) || !std::isfinite(rec.phi_dist))
      throw ConfigError("trace contains non-finite entries");
    s1 += rec.kappa * rec.phi_dist;
    s2 += rec.kappa;
    bound.push_back(h0_rate - a1 * s1 - a2 * s2);
  }
  return bound;
}

double epsilon_entropy_shift(std::int64_t K, std::int64_t d, double eps, double eps_prime) {
  if (K < 1 || d < 1) throw ConfigError("K and d must be positive");
  if (eps <= 0.0 || eps_prime <= 0.0) throw ConfigError("thicknesses must be positive");
  return static_cast<double>(K) / static_cast<double>(d) * std::log(eps / eps_prime);
}

double estimate_jacobian_norm(const EnergySpec& spec, const PeriodicSignal& x, int iters,
                              double fd_step, std::uint64_t seed) {
  if (iters < 1) throw ConfigError("power iteration needs at least 1 step");
  if (fd_step <= 0.0) throw ConfigError("finite-difference step must be positive");
  EnergyEvaluator ev(spec);
  const std::size_t d = x.v.size();

  Rng rng(seed, 0);
  std::vector<double> v(d);
  double nv2 = 0.0;
  for (auto& e : v) {
    e = rng.gaussian();
    nv2 += e * e;
  }
  const double nv = std::sqrt(nv2);
  for (auto& e : v) e /= nv;

  PeriodicSignal xp(x.shape), xm(x.shape);
  double lambda = 0.0;
  for (int it = 0; it < iters; ++it) {
    for (std::size_t i = 0; i < d; ++i) {
      xp.v[i] = x.v[i] + fd_step * v[i];
      xm.v[i] = x.v[i] - fd_step * v[i];
    }
    const EnergyVector fp = ev.eval(xp), fm = ev.eval(xm);
    std::vector<double> u(fp.values.size());
    double nu2 = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
      u[k] = (fp.values[k] - fm.values[k]) / (2.0 * fd_step);
      nu2 += u[k] * u[k];
    }
    lambda = nu2;  // ||J v||^2 with unit v
    if (nu2 == 0.0) return 0.0;

    PeriodicSignal w = ev.grad_weighted(x, u);  // J^T (J v)
    const double nw = std::sqrt(l2_norm_sq(w.v));
    if (nw == 0.0) return 0.0;
    for (std::size_t i = 0; i < d; ++i) v[i] = w.v[i] / nw;
  }
  return std::sqrt(lambda);
}

std::string format_table(const std::string& title, const std::vector<std::string>& row_labels,
                         const std::vector<std::string>& col_labels,
                         const std::vector<std::vector<double>>& cells) {
  if (cells.size() != row_labels.size()) throw ConfigError("table row count mismatch");
  for (const auto& row : cells)
    if (row.size() != col_labels.size()) throw ConfigError("table column count mismatch");

  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return std::string(buf);
  };

  std::size_t w0 = title.size();
  for (const auto& r : row_labels) w0 = std::max(w0, r.size());
  std::vector<std::size_t> w(col_labels.size());
  for (std::size_t c = 0; c < col_labels.size(); ++c) {
    w[c] = col_labels[c].size();
    for (std::size_t r = 0; r < cells.size(); ++r) w[c] = std::max(w[c], fmt(cells[r][c]).size());
  }

  std::string out;
  auto pad = [&out](const std::string& s, std::size_t width) {
    out += s;
    out.append(width - s.size(), ' ');
  };
  pad(title, w0);
  for (std::size_t c = 0; c < col_labels.size(); ++c) {
    out += "  ";
    pad(col_labels[c], w[c]);
  }
  out += '\n';
  for (std::size_t r = 0; r < cells.size(); ++r) {
    pad(row_labels[r], w0);
    for (std::size_t c = 0; c < col_labels.size(); ++c) {
      out += "  ";
      pad(fmt(cells[r][c]), w[c]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace mcgd
