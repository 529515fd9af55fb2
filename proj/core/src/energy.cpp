#include "mcgd/energy.hpp"

#include <cmath>
#include <cstdio>

namespace mcgd {
namespace {

inline double smooth_abs(double x, double eps) {
  return eps == 0.0 ? std::fabs(x) : std::sqrt(x * x + eps * eps) - eps;
}
inline double smooth_sign(double x, double eps) {
  if (eps == 0.0) return x == 0.0 ? 0.0 : (x > 0.0 ? 1.0 : -1.0);
  return x / std::sqrt(x * x + eps * eps);
}
inline double smooth_abs(const cplx& z, double eps) {
  const double n = std::norm(z);
  return eps == 0.0 ? std::sqrt(n) : std::sqrt(n + eps * eps) - eps;
}
inline cplx smooth_sign(const cplx& z, double eps) {
  const double n = std::norm(z);
  if (eps == 0.0) return n == 0.0 ? cplx(0.0, 0.0) : z / std::sqrt(n);
  return z / std::sqrt(n + eps * eps);
}

std::string band_label(const char* prefix, int j, int q) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s:j=%d:q=%d", prefix, j, q);
  return buf;
}

std::string pair_label(const ScatPair& p) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "scat2:j=%d:q=%d:j2=%d:q2=%d", p.j1, p.q1, p.j2, p.q2);
  return buf;
}

bool spectrum_symmetric(const ComplexField& hat) {
  const GridShape& s = hat.shape;
  double peak = 0.0;
  for (const auto& z : hat.v) peak = std::max(peak, std::norm(z));
  const std::int64_t R = s.rows, C = s.cols;
  for (std::int64_t r = 0; r < R; ++r) {
    for (std::int64_t c = 0; c < C; ++c) {
      const double a = std::norm(hat.v[static_cast<std::size_t>(r * C + c)]);
      const double b =
          std::norm(hat.v[static_cast<std::size_t>(((R - r) % R) * C + (C - c) % C)]);
      if (std::fabs(a - b) > 1e-12 * std::max(1.0, peak)) return false;
    }
  }
  return true;
}

}  // namespace

GridShape EnergySpec::dims() const {
  if (bank) return bank->dims;
  if (family == Family::GaussianScalar) return scalar_hat.shape;
  return grid;
}

std::size_t EnergySpec::size() const {
  std::size_t k = 0;
  if (include_l2x) ++k;
  if (include_l1x) ++k;
  if (include_mean) ++k;
  switch (family) {
    case Family::WaveletL2:
    case Family::WaveletL1:
      k += (bank ? bank->bands.size() : 0) + (include_lowpass ? 1 : 0);
      break;
    case Family::Scattering:
      k += (bank ? bank->bands.size() : 0) + (include_lowpass ? 1 : 0) + pairs.size();
      break;
    case Family::IsingQuadratic:
    case Family::GaussianScalar:
      k += 1;
      break;
  }
  return k;
}

std::vector<std::string> EnergySpec::make_labels() const {
  std::vector<std::string> out;
  out.reserve(size());
  if (include_l2x) out.push_back("l2_sq");
  if (include_l1x) out.push_back("l1_norm");
  if (include_mean) out.push_back("mean");
  switch (family) {
    case Family::WaveletL2:
      for (const auto& b : bank->bands) out.push_back(band_label("wavelet_l2", b.j, b.q));
      if (include_lowpass) out.push_back("wavelet_l2:lowpass");
      break;
    case Family::WaveletL1:
      for (const auto& b : bank->bands) out.push_back(band_label("wavelet_l1", b.j, b.q));
      if (include_lowpass) out.push_back("wavelet_l1:lowpass");
      break;
    case Family::Scattering:
      for (const auto& b : bank->bands) out.push_back(band_label("scat1", b.j, b.q));
      if (include_lowpass) out.push_back("scat1:lowpass");
      for (const auto& p : pairs) out.push_back(pair_label(p));
      break;
    case Family::IsingQuadratic:
      out.push_back("ising_quad");
      break;
    case Family::GaussianScalar:
      out.push_back("filter_l2");
      break;
  }
  return out;
}

void EnergySpec::validate() const {
  if (eps_mod < 0.0) throw ConfigError("eps_mod must be >= 0");
  const bool needs_bank = family == Family::WaveletL2 || family == Family::WaveletL1 ||
                          family == Family::Scattering;
  if (needs_bank) {
    if (!bank) throw ConfigError("wavelet energy needs a filter bank");
    bank->validate();
  }
  if (include_lowpass && !needs_bank)
    throw ConfigError("include_lowpass only applies to wavelet families");
  if (family == Family::GaussianScalar) {
    scalar_hat.shape.validate();
    if (scalar_hat.v.size() != static_cast<std::size_t>(scalar_hat.shape.count()))
      throw ConfigError("scalar filter spectrum size mismatch");
  }
  if (family == Family::IsingQuadratic) grid.validate();
  if (family == Family::Scattering) {
    for (const auto& p : pairs) {
      if (bank->band_index(p.j1, p.q1) < 0 || bank->band_index(p.j2, p.q2) < 0)
        throw ConfigError("scattering pair references a band outside the bank");
    }
  } else if (!pairs.empty()) {
    throw ConfigError("pair list is only meaningful for the scattering family");
  }
  if (size() == 0) throw ConfigError("energy spec has no descriptors");
  dims().validate();
}

std::vector<ScatPair> increasing_scale_pairs(const FilterBank& bank, int q2_stride) {
  if (q2_stride < 1) throw ConfigError("q2_stride must be >= 1");
  std::vector<ScatPair> out;
  for (int j1 = 1; j1 <= bank.J; ++j1)
    for (int q1 = 0; q1 < bank.Q; ++q1)
      for (int j2 = j1 + 1; j2 <= bank.J; ++j2)
        for (int q2 = 0; q2 < bank.Q; q2 += q2_stride)
          out.push_back(ScatPair{j1, q1, j2, q2});
  return out;
}

std::vector<ScatPair> all_scale_pairs(const FilterBank& bank) {
  std::vector<ScatPair> out;
  for (const auto& a : bank.bands)
    for (const auto& b : bank.bands) out.push_back(ScatPair{a.j, a.q, b.j, b.q});
  return out;
}

EnergyEvaluator::EnergyEvaluator(EnergySpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  labels_ = std::make_shared<const std::vector<std::string>>(spec_.make_labels());

  std::size_t flag_count = 0;
  if (spec_.include_l2x) ++flag_count;
  if (spec_.include_l1x) ++flag_count;
  if (spec_.include_mean) ++flag_count;

  if (spec_.family == Family::Scattering) {
    pair_groups_.assign(spec_.bank->bands.size(), {});
    const std::size_t pair_base =
        flag_count + spec_.bank->bands.size() + (spec_.include_lowpass ? 1 : 0);
    for (std::size_t p = 0; p < spec_.pairs.size(); ++p) {
      const auto& pr = spec_.pairs[p];
      const int a = spec_.bank->band_index(pr.j1, pr.q1);
      const int b = spec_.bank->band_index(pr.j2, pr.q2);
      pair_groups_[static_cast<std::size_t>(a)].push_back({b, pair_base + p});
    }
  }

  if (spec_.family == Family::GaussianScalar) {
    l2_symmetric_ = spectrum_symmetric(spec_.scalar_hat);
  } else if (spec_.family == Family::WaveletL2) {
    l2_symmetric_ = !spec_.include_lowpass || spectrum_symmetric(spec_.bank->low_pass);
    for (const auto& b : spec_.bank->bands)
      if (!spectrum_symmetric(b.hat)) {
        l2_symmetric_ = false;
        break;
      }
  }
}

EnergyVector EnergyEvaluator::eval(const PeriodicSignal& x) {
  EnergyVector phi;
  run_pass(x, Mode::Eval, nullptr, nullptr, phi, nullptr);
  return phi;
}

double EnergyEvaluator::objective(const PeriodicSignal& x, const EnergyVector& y) {
  EnergyVector phi = eval(x);
  if (y.values.size() != phi.values.size()) throw ConfigError("target energy size mismatch");
  double e = 0.0;
  for (std::size_t i = 0; i < phi.values.size(); ++i) {
    const double r = phi.values[i] - y.values[i];
    e += r * r;
  }
  return 0.5 * e;
}

EnergyEvaluator::GradResult EnergyEvaluator::grad_objective(const PeriodicSignal& x,
                                                            const EnergyVector& y) {
  if (y.values.size() != spec_.size()) throw ConfigError("target energy size mismatch");
  GradResult out;
  run_pass(x, Mode::GradResidual, &y, nullptr, out.phi, &out.grad);
  double e = 0.0;
  for (std::size_t i = 0; i < out.phi.values.size(); ++i) {
    const double r = out.phi.values[i] - y.values[i];
    e += r * r;
  }
  out.objective = 0.5 * e;
  return out;
}

PeriodicSignal EnergyEvaluator::grad_weighted(const PeriodicSignal& x,
                                              const std::vector<double>& w) {
  if (w.size() != spec_.size()) throw ConfigError("weight vector size mismatch");
  EnergyVector phi;
  PeriodicSignal grad;
  run_pass(x, Mode::GradWeighted, nullptr, &w, phi, &grad);
  return grad;
}

void EnergyEvaluator::run_pass(const PeriodicSignal& x, Mode mode, const EnergyVector* y,
                               const std::vector<double>* w, EnergyVector& phi,
                               PeriodicSignal* grad) {
  const GridShape dims = spec_.dims();
  if (x.shape != dims) throw ConfigError("signal shape does not match the energy spec");
  const std::size_t d = static_cast<std::size_t>(dims.count());
  const double invd = 1.0 / static_cast<double>(d);
  const double eps = spec_.eps_mod;
  const std::size_t K = spec_.size();

  phi.values.assign(K, 0.0);
  phi.labels = labels_;
  const bool need_grad = mode != Mode::Eval;
  if (need_grad) {
    grad->shape = dims;
    grad->v.assign(d, 0.0);
  }

  auto weight = [&](std::size_t slot) -> double {
    if (mode == Mode::GradResidual) return phi.values[slot] - y->values[slot];
    if (mode == Mode::GradWeighted) return (*w)[slot];
    return 0.0;
  };

  std::size_t slot = 0;
  if (spec_.include_l2x) {
    double v = 0.0;
    for (double xi : x.v) v += xi * xi;
    phi.values[slot] = v * invd;
    if (need_grad) {
      const double c = weight(slot) * 2.0 * invd;
      for (std::size_t i = 0; i < d; ++i) grad->v[i] += c * x.v[i];
    }
    ++slot;
  }
  if (spec_.include_l1x) {
    double v = 0.0;
    for (double xi : x.v) v += smooth_abs(xi, eps);
    phi.values[slot] = v * invd;
    if (need_grad) {
      const double c = weight(slot) * invd;
      for (std::size_t i = 0; i < d; ++i) grad->v[i] += c * smooth_sign(x.v[i], eps);
    }
    ++slot;
  }
  if (spec_.include_mean) {
    double v = 0.0;
    for (double xi : x.v) v += xi;
    phi.values[slot] = v * invd;
    if (need_grad) {
      const double c = weight(slot) * invd;
      for (std::size_t i = 0; i < d; ++i) grad->v[i] += c;
    }
    ++slot;
  }

  const bool uses_fft = spec_.family == Family::WaveletL2 || spec_.family == Family::WaveletL1 ||
                        spec_.family == Family::Scattering ||
                        spec_.family == Family::GaussianScalar;
  bool have_W = false, have_G = false;
  if (uses_fft) {
    X_.shape = dims;
    X_.v.resize(d);
    for (std::size_t i = 0; i < d; ++i) X_.v[i] = cplx(x.v[i], 0.0);
    fft_inplace(X_, false);
    if (need_grad) {
      Wacc_.assign(d, 0.0);
      Gacc_.shape = dims;
      Gacc_.v.assign(d, cplx(0.0, 0.0));
    }
  }

  auto band_l2 = [&](const ComplexField& hat, std::size_t s) {
    double v = 0.0;
    for (std::size_t i = 0; i < d; ++i) v += std::norm(X_.v[i]) * std::norm(hat.v[i]);
    phi.values[s] = v * invd * invd;
    if (need_grad) {
      const double c = weight(s) * 2.0 * invd;
      for (std::size_t i = 0; i < d; ++i) Wacc_[i] += c * std::norm(hat.v[i]);
      have_W = true;
    }
  };

  auto band_l1 = [&](const ComplexField& hat, std::size_t s) {
    c1_.shape = dims;
    c1_.v.resize(d);
    for (std::size_t i = 0; i < d; ++i) c1_.v[i] = X_.v[i] * hat.v[i];
    fft_inplace(c1_, true);
    double v = 0.0;
    for (std::size_t i = 0; i < d; ++i) v += smooth_abs(c1_.v[i], eps);
    phi.values[s] = v * invd;
    if (need_grad) {
      const double c = weight(s) * invd;
      for (std::size_t i = 0; i < d; ++i) c1_.v[i] = smooth_sign(c1_.v[i], eps);
      fft_inplace(c1_, false);
      for (std::size_t i = 0; i < d; ++i) Gacc_.v[i] += c * c1_.v[i] * std::conj(hat.v[i]);
      have_G = true;
    }
  };

  switch (spec_.family) {
    case Family::GaussianScalar:
      band_l2(spec_.scalar_hat, slot);
      ++slot;
      break;

    case Family::WaveletL2:
      for (const auto& b : spec_.bank->bands) {
        band_l2(b.hat, slot);
        ++slot;
      }
      if (spec_.include_lowpass) {
        band_l2(spec_.bank->low_pass, slot);
        ++slot;
      }
      break;

    case Family::WaveletL1:
      for (const auto& b : spec_.bank->bands) {
        band_l1(b.hat, slot);
        ++slot;
      }
      if (spec_.include_lowpass) {
        band_l1(spec_.bank->low_pass, slot);
        ++slot;
      }
      break;

    case Family::Scattering: {
      c1_.shape = dims;
      c1_.v.resize(d);
      m1hat_.shape = dims;
      work_.shape = dims;
      work_.v.resize(d);
      Hacc_.shape = dims;
      const std::size_t first_base = slot;
      for (std::size_t a = 0; a < spec_.bank->bands.size(); ++a) {
        const auto& band_a = spec_.bank->bands[a];
        for (std::size_t i = 0; i < d; ++i) c1_.v[i] = X_.v[i] * band_a.hat.v[i];
        fft_inplace(c1_, true);
        const std::size_t slot_a = first_base + a;
        double v = 0.0;
        for (std::size_t i = 0; i < d; ++i) v += smooth_abs(c1_.v[i], eps);
        phi.values[slot_a] = v * invd;

        const auto& group = pair_groups_[a];
        if (!group.empty()) {
          m1hat_.v.resize(d);
          for (std::size_t i = 0; i < d; ++i) m1hat_.v[i] = cplx(smooth_abs(c1_.v[i], eps), 0.0);
          fft_inplace(m1hat_, false);
          if (need_grad) Hacc_.v.assign(d, cplx(0.0, 0.0));
          for (const auto& [b2, slot2] : group) {
            const auto& hat_b = spec_.bank->bands[static_cast<std::size_t>(b2)].hat;
            for (std::size_t i = 0; i < d; ++i) work_.v[i] = m1hat_.v[i] * hat_b.v[i];
            fft_inplace(work_, true);
            double v2 = 0.0;
            for (std::size_t i = 0; i < d; ++i) v2 += smooth_abs(work_.v[i], eps);
            phi.values[slot2] = v2 * invd;
            if (need_grad) {
              const double c2 = weight(slot2);
              for (std::size_t i = 0; i < d; ++i) work_.v[i] = smooth_sign(work_.v[i], eps);
              fft_inplace(work_, false);
              for (std::size_t i = 0; i < d; ++i)
                Hacc_.v[i] += c2 * work_.v[i] * std::conj(hat_b.v[i]);
            }
          }
          if (need_grad) {
            fft_inplace(Hacc_, true);
            const double wa = weight(slot_a);
            for (std::size_t i = 0; i < d; ++i)
              work_.v[i] = (wa + Hacc_.v[i].real()) * smooth_sign(c1_.v[i], eps);
            fft_inplace(work_, false);
            for (std::size_t i = 0; i < d; ++i)
              Gacc_.v[i] += invd * work_.v[i] * std::conj(band_a.hat.v[i]);
            have_G = true;
          }
        } else if (need_grad) {
          const double wa = weight(slot_a) * invd;
          for (std::size_t i = 0; i < d; ++i) work_.v[i] = smooth_sign(c1_.v[i], eps);
          fft_inplace(work_, false);
          for (std::size_t i = 0; i < d; ++i)
            Gacc_.v[i] += wa * work_.v[i] * std::conj(band_a.hat.v[i]);
          have_G = true;
        }
      }
      slot = first_base + spec_.bank->bands.size();
      if (spec_.include_lowpass) {
        band_l1(spec_.bank->low_pass, slot);
        ++slot;
      }
      slot += spec_.pairs.size();
      break;
    }

    case Family::IsingQuadratic: {
      nbr_.assign(d, 0.0);
      const std::int64_t R = dims.rows, C = dims.cols;
      for (std::int64_t r = 0; r < R; ++r) {
        const std::int64_t rm = (r + R - 1) % R, rp = (r + 1) % R;
        for (std::int64_t c = 0; c < C; ++c) {
          const std::int64_t cm = (c + C - 1) % C, cp = (c + 1) % C;
          double s = x.at(r, cm) + x.at(r, cp);
          if (dims.rank == 2) s += x.at(rm, c) + x.at(rp, c);
          nbr_[static_cast<std::size_t>(r * C + c)] = s;
        }
      }
      double v = 0.0;
      for (std::size_t i = 0; i < d; ++i) v += x.v[i] * nbr_[i];
      phi.values[slot] = v * invd;
      if (need_grad) {
        const double c = weight(slot) * 2.0 * invd;
        for (std::size_t i = 0; i < d; ++i) grad->v[i] += c * nbr_[i];
      }
      ++slot;
      break;
    }
  }

  if (slot != K) throw NumericError("descriptor slot bookkeeping error");

  if (need_grad && (have_W || have_G)) {
    if (have_W) {
      if (have_G) {
        for (std::size_t i = 0; i < d; ++i) Gacc_.v[i] += X_.v[i] * Wacc_[i];
      } else {
        for (std::size_t i = 0; i < d; ++i) Gacc_.v[i] = X_.v[i] * Wacc_[i];
      }
    }
    fft_inplace(Gacc_, true);
    if (l2_symmetric_ && !have_G) {
      // Symmetric quadratic spectra give a Hermitian product; the inverse
      // transform must come back real up to rounding.
      double im = 0.0, scale = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        im = std::max(im, std::fabs(Gacc_.v[i].imag()));
        scale += std::abs(Gacc_.v[i]);
      }
      scale *= invd;
      if (im > 1e-12 * std::max(scale, 1e-300))
        throw NumericError("gradient imaginary residue exceeds tolerance");
    }
    for (std::size_t i = 0; i < d; ++i) grad->v[i] += Gacc_.v[i].real();
  }
}

EnergyVector eval_phi(const PeriodicSignal& x, const EnergySpec& spec) {
  EnergyEvaluator ev(spec);
  return ev.eval(x);
}

double eval_objective(const PeriodicSignal& x, const EnergyVector& y, const EnergySpec& spec) {
  EnergyEvaluator ev(spec);
  return ev.objective(x, y);
}

PeriodicSignal grad_objective(const PeriodicSignal& x, const EnergyVector& y,
                              const EnergySpec& spec) {
  EnergyEvaluator ev(spec);
  return ev.grad_objective(x, y).grad;
}

}  // namespace mcgd
