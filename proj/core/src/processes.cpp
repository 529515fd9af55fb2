#include "mcgd/processes.hpp"

#include <cmath>
#include <cstdint>

#include "mcgd/parallel.hpp"
#include "mcgd/rng.hpp"

namespace mcgd {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kIsingTc = 2.2691853142130221;  // 2 / log(1 + sqrt 2)

PeriodicSignal shaped_gaussian(const GridShape& dims, const std::vector<double>& power,
                               Rng& rng) {
  PeriodicSignal w(dims);
  for (auto& v : w.v) v = rng.gaussian();
  ComplexField X = fft(w);
  for (std::size_t i = 0; i < X.v.size(); ++i) X.v[i] *= std::sqrt(power[i]);
  fft_inplace(X, true);
  PeriodicSignal x(dims);
  for (std::size_t i = 0; i < x.v.size(); ++i) x.v[i] = X.v[i].real();
  return x;
}

}  // namespace

ComplexField exponential_kernel_response(GridShape dims, double xi) {
  dims.validate();
  if (xi <= 0.0) throw ConfigError("kernel scale xi must be > 0");
  PeriodicSignal h(dims);
  const std::int64_t R = dims.rows, C = dims.cols;
  for (std::int64_t r = 0; r < R; ++r) {
    const double dr = static_cast<double>(std::min(r, R - r));
    for (std::int64_t c = 0; c < C; ++c) {
      const double dc = static_cast<double>(std::min(c, C - c));
      const double dist = dims.rank == 1 ? dc : std::sqrt(dr * dr + dc * dc);
      h.at(r, c) = std::exp(-dist / xi);
    }
  }
  ComplexField hat = fft(h);

  // Scale so the model spectrum 1/|h|^2 has unit mean (unit field variance).
  double inv_mean = 0.0;
  for (const auto& z : hat.v) {
    const double m2 = std::norm(z);
    if (m2 <= 0.0) throw ConfigError("exponential kernel response vanishes on the grid");
    inv_mean += 1.0 / m2;
  }
  inv_mean /= static_cast<double>(hat.v.size());
  const double c = std::sqrt(inv_mean);
  for (auto& z : hat.v) z *= c;
  return hat;
}

SpectralModel exponential_kernel_spectrum(GridShape dims, double xi) {
  ComplexField hat = exponential_kernel_response(dims, xi);
  SpectralModel model;
  model.dims = dims;
  model.power.resize(hat.v.size());
  for (std::size_t i = 0; i < hat.v.size(); ++i) model.power[i] = 1.0 / std::norm(hat.v[i]);
  return model;
}

ComplexField lorentzian_kernel_response(GridShape dims, double xi) {
  dims.validate();
  if (xi <= 0.0) throw ConfigError("kernel scale xi must be > 0");
  constexpr int kAliases = 8;  // tail terms decay like (2 pi m)^-4
  constexpr double kTau = 6.283185307179586476925286766559;
  ComplexField hat;
  hat.shape = dims;
  hat.v.resize(static_cast<std::size_t>(dims.count()));
  const std::int64_t R = dims.rows, C = dims.cols;
  for (std::int64_t r = 0; r < R; ++r) {
    const double wr = dims.rank == 1 ? 0.0 : kTau * static_cast<double>(r) / static_cast<double>(R);
    for (std::int64_t c = 0; c < C; ++c) {
      const double wc = kTau * static_cast<double>(c) / static_cast<double>(C);
      double s = 0.0;
      for (int mr = dims.rank == 1 ? 0 : -kAliases; mr <= (dims.rank == 1 ? 0 : kAliases); ++mr) {
        const double ar = wr + kTau * mr;
        for (int mc = -kAliases; mc <= kAliases; ++mc) {
          const double ac = wc + kTau * mc;
          const double q = xi * xi + ar * ar + ac * ac;
          s += 1.0 / (q * q);
        }
      }
      hat.v[static_cast<std::size_t>(r * C + c)] = cplx(std::sqrt(s), 0.0);
    }
  }

  // Scale so the model spectrum 1/|h|^2 has unit mean (unit field variance).
  double inv_mean = 0.0;
  for (const auto& z : hat.v) inv_mean += 1.0 / std::norm(z);
  inv_mean /= static_cast<double>(hat.v.size());
  const double c = std::sqrt(inv_mean);
  for (auto& z : hat.v) z *= c;
  return hat;
}

SpectralModel lorentzian_kernel_spectrum(GridShape dims, double xi) {
  ComplexField hat = lorentzian_kernel_response(dims, xi);
  SpectralModel model;
  model.dims = dims;
  model.power.resize(hat.v.size());
  for (std::size_t i = 0; i < hat.v.size(); ++i) model.power[i] = 1.0 / std::norm(hat.v[i]);
  return model;
}

std::vector<PeriodicSignal> sample_spectral_gaussian(const SpectralModel& model, int count,
                                                     std::uint64_t seed) {
  model.dims.validate();
  if (model.power.size() != static_cast<std::size_t>(model.dims.count()))
    throw ConfigError("spectral model size mismatch");
  for (double p : model.power)
    if (!(p >= 0.0)) throw ConfigError("power spectrum must be non-negative");

  std::vector<PeriodicSignal> out(static_cast<std::size_t>(count));
  parallel_for(out.size(), [&](std::size_t i) {
    Rng rng(seed, i);
    out[i] = shaped_gaussian(model.dims, model.power, rng);
  });
  return out;
}

std::vector<PeriodicSignal> sample_ising(const IsingModel& model, int count, std::uint64_t seed) {
  if (model.n < 3) throw ConfigError("ising grid side must be >= 3");
  if (model.temperature <= 0.0) throw ConfigError("ising temperature must be > 0");
  const std::int64_t n = model.n;
  const std::size_t d = static_cast<std::size_t>(n * n);
  const double T = model.temperature;

  IsingModel::Algo algo = model.algo;
  if (algo == IsingModel::Algo::Auto)
    algo = std::fabs(T - kIsingTc) < 0.35 ? IsingModel::Algo::Wolff : IsingModel::Algo::Metropolis;

  std::vector<PeriodicSignal> out(static_cast<std::size_t>(count));
  parallel_for(out.size(), [&](std::size_t idx) {
    Rng rng(seed, idx);
    std::vector<std::int8_t> s(d);
    if (T < kIsingTc) {
      for (auto& v : s) v = 1;  // cold start inside the + sector
    } else {
      for (auto& v : s) v = rng.uniform() < 0.5 ? std::int8_t(-1) : std::int8_t(1);
    }

    auto site = [&](std::int64_t r, std::int64_t c) -> std::int8_t& {
      return s[static_cast<std::size_t>(wrap_index(r, n) * n + wrap_index(c, n))];
    };

    const int total_sweeps = model.burn_in_sweeps + model.thin_sweeps;
    if (algo == IsingModel::Algo::Metropolis) {
      // Precomputed flip acceptances for the five possible neighbor sums.
      double accept[5];
      for (int k = 0; k < 5; ++k) {
        const int nbr = -4 + 2 * k;
        accept[k] = std::exp(-2.0 * nbr / T);
      }
      // Random-scan updates: a raster scan with deterministic downhill flips
      // is stationary for the Boltzmann law but not aperiodic (the sweep map
      // keeps unit-circle spectrum), which phase-locks small grids away from
      // equilibrium. Random site choice restores convergence.
      for (int sweep = 0; sweep < total_sweeps; ++sweep) {
        for (std::size_t step = 0; step < d; ++step) {
          const auto cur = static_cast<std::int64_t>(rng.raw() % d);
          const std::int64_t r = cur / n, c = cur % n;
          const int nbr = site(r - 1, c) + site(r + 1, c) + site(r, c - 1) + site(r, c + 1);
          const int delta = static_cast<int>(site(r, c)) * nbr;  // in {-4,-2,0,2,4}
          if (delta <= 0 || rng.uniform() < accept[(delta + 4) / 2]) site(r, c) = -site(r, c);
        }
      }
    } else {
      // Wolff single-cluster updates; one "sweep" is one cluster flip.
      const double p_add = 1.0 - std::exp(-2.0 / T);
      std::vector<std::int64_t> stack;
      stack.reserve(d);
      for (int sweep = 0; sweep < total_sweeps; ++sweep) {
        const std::int64_t seed_site = static_cast<std::int64_t>(rng.raw() % d);
        const std::int8_t target = s[static_cast<std::size_t>(seed_site)];
        s[static_cast<std::size_t>(seed_site)] = -target;
        stack.clear();
        stack.push_back(seed_site);
        while (!stack.empty()) {
          const std::int64_t cur = stack.back();
          stack.pop_back();
          const std::int64_t r = cur / n, c = cur % n;
          const std::int64_t nb[4] = {wrap_index(r - 1, n) * n + c, wrap_index(r + 1, n) * n + c,
                                      r * n + wrap_index(c - 1, n), r * n + wrap_index(c + 1, n)};
          for (std::int64_t b : nb) {
            if (s[static_cast<std::size_t>(b)] == target && rng.uniform() < p_add) {
              s[static_cast<std::size_t>(b)] = -target;
              stack.push_back(b);
            }
          }
        }
      }
    }

    if (model.fix_sector && T < kIsingTc) {
      std::int64_t m = 0;
      for (auto v : s) m += v;
      if (m < 0)
        for (auto& v : s) v = -v;
    }

    PeriodicSignal x(GridShape::square(n));
    for (std::size_t i = 0; i < d; ++i) x.v[i] = static_cast<double>(s[i]);
    out[idx] = std::move(x);
  });
  return out;
}

double ising_energy_per_site(const PeriodicSignal& x) {
  const std::int64_t R = x.shape.rows, C = x.shape.cols;
  double e = 0.0;
  for (std::int64_t r = 0; r < R; ++r) {
    for (std::int64_t c = 0; c < C; ++c) {
      const double s = x.at(r, c);
      e -= s * x.at(r, (c + 1) % C);
      if (x.shape.rank == 2) e -= s * x.at((r + 1) % R, c);
    }
  }
  return e / static_cast<double>(x.shape.count());
}

FilterTaps default_shot_noise_kernel() {
  FilterTaps taps;
  taps.rank = 2;
  taps.rows = 5;
  taps.cols = 5;
  taps.origin_row = 2;
  taps.origin_col = 2;
  taps.v.resize(25);
  double total = 0.0;
  for (std::int64_t r = 0; r < 5; ++r) {
    for (std::int64_t c = 0; c < 5; ++c) {
      const double dr = static_cast<double>(r - 2), dc = static_cast<double>(c - 2);
      const double g = std::exp(-(dr * dr + dc * dc) / (2.0 * 1.2 * 1.2));
      taps.v[static_cast<std::size_t>(r * 5 + c)] = g;
      total += g;
    }
  }
  const double m = total / 25.0;
  for (auto& v : taps.v) v -= m;
  return taps;
}

PeriodicSignal sample_shot_noise_rate(const ShotNoiseModel& model, std::uint64_t seed,
                                      std::uint64_t stream) {
  model.dims.validate();
  if (model.dims.rank != 2) throw ConfigError("shot noise model is two-dimensional");
  if (model.mean_rate < 0.0 || model.rate_std < 0.0)
    throw ConfigError("shot noise rates must be non-negative");

  const std::int64_t n = model.dims.cols;
  std::vector<double> power(static_cast<std::size_t>(model.dims.count()));
  double total = 0.0;
  for (std::int64_t r = 0; r < n; ++r) {
    const double wy = 2.0 * kPi * (r <= n / 2 ? r : r - n) / static_cast<double>(n);
    for (std::int64_t c = 0; c < n; ++c) {
      const double wx = 2.0 * kPi * (c <= n / 2 ? c : c - n) / static_cast<double>(n);
      const double p = std::exp(-0.5 * (model.corr_cols * model.corr_cols * wx * wx +
                                        model.corr_rows * model.corr_rows * wy * wy));
      power[static_cast<std::size_t>(r * n + c)] = p;
      total += p;
    }
  }
  const double norm = total / static_cast<double>(power.size());
  for (auto& p : power) p /= norm;  // unit-variance rate fluctuation

  Rng rng(seed, stream);
  PeriodicSignal g = shaped_gaussian(model.dims, power, rng);
  PeriodicSignal rate(model.dims);
  for (std::size_t i = 0; i < rate.v.size(); ++i)
    rate.v[i] = std::max(0.0, model.mean_rate + model.rate_std * g.v[i]);
  return rate;
}

std::vector<PeriodicSignal> sample_shot_noise(const ShotNoiseModel& model, int count,
                                              std::uint64_t seed) {
  const FilterTaps taps = model.kernel.v.empty() ? default_shot_noise_kernel() : model.kernel;
  const ComplexField khat = periodize_filter(taps, model.dims);

  std::vector<PeriodicSignal> out(static_cast<std::size_t>(count));
  parallel_for(out.size(), [&](std::size_t i) {
    PeriodicSignal rate = sample_shot_noise_rate(model, seed, 2 * i);
    Rng rng(seed, 2 * i + 1);
    PeriodicSignal counts(model.dims);
    for (std::size_t u = 0; u < counts.v.size(); ++u)
      counts.v[u] = static_cast<double>(rng.poisson(rate.v[u]));
    ComplexField conv = circular_convolve(counts, khat);
    PeriodicSignal x(model.dims);
    for (std::size_t u = 0; u < x.v.size(); ++u) x.v[u] = conv.v[u].real();
    out[i] = std::move(x);
  });
  return out;
}

}  // namespace mcgd
