#include "mcgd/filters.hpp"

#include <cmath>
#include <string>

namespace mcgd {
namespace {

constexpr double kPi = 3.14159265358979323846;

// Morlet geometry, expressed in the frequency domain. The spatial envelope
// std at octave j is kMorletSigma0 * 2^(j-1); slant < 1 makes each oriented
// band wider across the propagation direction than along it, so the rotated
// copies tile the rings between dyadic radii.
constexpr double kMorletXi0 = 3.0 * kPi / 4.0;
constexpr double kMorletSigma0 = 0.7;
constexpr double kMorletSlant = 0.5;
// Low-pass support radius in units of the coarsest ring radius xi0 * 2^(1-J).
constexpr double kMorletLowPassCut = 1.4;

// Gabor band std as a fraction of the octave-slice width, and the low-pass
// support in units of the coarsest band edge pi * 2^-J.
constexpr double kGaborWidth = 0.8;
constexpr double kGaborLowPassCut = 1.5;

std::size_t negated_index(const GridShape& s, std::size_t i) {
  const std::int64_t C = s.cols;
  const std::int64_t r = static_cast<std::int64_t>(i) / C;
  const std::int64_t c = static_cast<std::int64_t>(i) % C;
  return static_cast<std::size_t>(((s.rows - r) % s.rows) * C + (C - c) % C);
}

// 0.5 * sum_b (|psi_b(w)|^2 + |psi_b(-w)|^2) per frequency bin.
std::vector<double> symmetrized_band_power(const FilterBank& bank) {
  const std::size_t d = static_cast<std::size_t>(bank.dims.count());
  std::vector<double> band2(d, 0.0);
  for (const auto& b : bank.bands) {
    for (std::size_t i = 0; i < d; ++i) {
      const double m2 = std::norm(b.hat.v[i]);
      band2[i] += 0.5 * m2;
      band2[negated_index(bank.dims, i)] += 0.5 * m2;
    }
  }
  return band2;
}

// Squared frequency magnitude of bin i, with components folded to [-pi, pi).
double bin_freq_sq(const GridShape& s, std::size_t i) {
  const std::int64_t r = static_cast<std::int64_t>(i) / s.cols;
  const std::int64_t c = static_cast<std::int64_t>(i) % s.cols;
  const double wy = s.rank == 2
                        ? 2.0 * kPi * (r <= s.rows / 2 ? r : r - s.rows) / static_cast<double>(s.rows)
                        : 0.0;
  const double wx = 2.0 * kPi * (c <= s.cols / 2 ? c : c - s.cols) / static_cast<double>(s.cols);
  return wx * wx + wy * wy;
}

// The low-pass fills whatever the band ladder leaves uncovered near zero
// frequency: inside the cutoff ball, |phi|^2 tops the symmetrized band power
// up to its peak level there. Band-pass filters have zero mean, so this also
// pins phi(0) = 1 and the calibration scale at the seam.
void fill_complement_low_pass(FilterBank& bank, double cutoff) {
  const std::size_t d = static_cast<std::size_t>(bank.dims.count());
  const auto band2 = symmetrized_band_power(bank);
  const double cut2 = cutoff * cutoff;
  double level = 0.0;
  for (std::size_t i = 0; i < d; ++i)
    if (bin_freq_sq(bank.dims, i) <= cut2) level = std::max(level, band2[i]);
  if (level <= 0.0)
    throw ConfigError("filter bank has no band coverage near zero frequency");
  ComplexField lp(bank.dims);
  for (std::size_t i = 0; i < d; ++i) {
    const double fill = (bin_freq_sq(bank.dims, i) <= cut2)
                            ? std::max(0.0, level - band2[i]) / level
                            : 0.0;
    lp.v[i] = cplx(std::sqrt(fill), 0.0);
  }
  bank.low_pass = std::move(lp);
}

// max_w |P(w) + lambda * B(w) - 1|; convex in lambda.
double deviation_for(const std::vector<double>& low2, const std::vector<double>& band2,
                     double lambda) {
  double g = 0.0;
  for (std::size_t i = 0; i < low2.size(); ++i)
    g = std::max(g, std::fabs(low2[i] + lambda * band2[i] - 1.0));
  return g;
}

// Scales every band-pass filter by a common factor minimizing the measured
// Littlewood-Paley deviation, then records the achieved gamma.
void calibrate_bank(FilterBank& bank) {
  const std::size_t d = static_cast<std::size_t>(bank.dims.count());
  std::vector<double> low2(d);
  for (std::size_t i = 0; i < d; ++i) low2[i] = std::norm(bank.low_pass.v[i]);
  const std::vector<double> band2 = symmetrized_band_power(bank);

  double lo = 1e-6, hi = 1e6;
  for (int it = 0; it < 200; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (deviation_for(low2, band2, m1) < deviation_for(low2, band2, m2))
      hi = m2;
    else
      lo = m1;
  }
  const double lambda = 0.5 * (lo + hi);
  const double scale = std::sqrt(lambda);
  for (auto& b : bank.bands)
    for (auto& z : b.hat.v) z *= scale;
  bank.gamma = deviation_for(low2, band2, lambda);
}

void check_build_params(std::int64_t side, int J, int Q) {
  if (J < 1 || Q < 1) throw ConfigError("filter bank needs J >= 1 and Q >= 1");
  if ((std::int64_t{1} << J) > side)
    throw ConfigError("largest scale 2^J exceeds the grid side");
}

}  // namespace

int FilterBank::band_index(int j, int q) const {
  if (j < 1 || j > J || q < 0 || q >= Q) return -1;
  return (j - 1) * Q + q;
}

const ComplexField& FilterBank::band_hat(int j, int q) const {
  const int i = band_index(j, q);
  if (i < 0) throw ConfigError("no band (j=" + std::to_string(j) + ", q=" + std::to_string(q) + ")");
  return bands[static_cast<std::size_t>(i)].hat;
}

void FilterBank::validate() const {
  dims.validate();
  if (bands.size() != static_cast<std::size_t>(J) * static_cast<std::size_t>(Q))
    throw ConfigError("filter bank band count mismatch");
  if (low_pass.shape != dims) throw ConfigError("filter bank low-pass shape mismatch");
  if (!(gamma < 1.0)) throw ConfigError("filter bank is not a frame (gamma >= 1)");
}

FilterBank build_morlet_2d(std::int64_t n, int J, int Q) {
  GridShape dims = GridShape::square(n);
  dims.validate();
  check_build_params(n, J, Q);

  FilterBank bank;
  bank.kind = BankKind::Morlet2d;
  bank.dims = dims;
  bank.J = J;
  bank.Q = Q;
  const double slant = kMorletSlant;

  for (int j = 1; j <= J; ++j) {
    const double xi = kMorletXi0 / std::pow(2.0, j - 1);
    const double sigma = kMorletSigma0 * std::pow(2.0, j - 1);
    for (int q = 0; q < Q; ++q) {
      const double theta = kPi * q / Q;
      const double ct = std::cos(theta), st = std::sin(theta);
      ComplexField hat(dims);
      double raw0 = 0.0, ctr0 = 0.0;
      std::vector<double> raw(static_cast<std::size_t>(dims.count()));
      std::vector<double> ctr(static_cast<std::size_t>(dims.count()));
      for (std::int64_t r = 0; r < n; ++r) {
        const double wy0 = 2.0 * kPi * (r <= n / 2 ? r : r - n) / static_cast<double>(n);
        for (std::int64_t c = 0; c < n; ++c) {
          const double wx0 = 2.0 * kPi * (c <= n / 2 ? c : c - n) / static_cast<double>(n);
          double a = 0.0, b = 0.0;
          for (int my = -2; my <= 2; ++my) {
            for (int mx = -2; mx <= 2; ++mx) {
              const double wx = wx0 + 2.0 * kPi * mx;
              const double wy = wy0 + 2.0 * kPi * my;
              const double wpar = wx * ct + wy * st;
              const double wperp = -wx * st + wy * ct;
              const double env = sigma * sigma *
                  (slant * slant * wperp * wperp);
              a += std::exp(-0.5 * (sigma * sigma * (wpar - xi) * (wpar - xi) + env));
              b += std::exp(-0.5 * (sigma * sigma * wpar * wpar + env));
            }
          }
          raw[static_cast<std::size_t>(r * n + c)] = a;
          ctr[static_cast<std::size_t>(r * n + c)] = b;
        }
      }
      raw0 = raw[0];
      ctr0 = ctr[0];
      const double beta = raw0 / ctr0;
      for (std::size_t i = 0; i < raw.size(); ++i)
        hat.v[i] = cplx(raw[i] - beta * ctr[i], 0.0);
      bank.bands.push_back(BandFilter{j, q, std::move(hat)});
    }
  }

  fill_complement_low_pass(bank, kMorletLowPassCut * kMorletXi0 / std::pow(2.0, J - 1));
  calibrate_bank(bank);
  bank.validate();
  return bank;
}

FilterBank build_gabor_1d(std::int64_t d, int J, int Q) {
  GridShape dims = GridShape::line(d);
  dims.validate();
  check_build_params(d, J, Q);

  FilterBank bank;
  bank.kind = BankKind::Gabor1d;
  bank.dims = dims;
  bank.J = J;
  bank.Q = Q;

  for (int j = 1; j <= J; ++j) {
    for (int q = 0; q < Q; ++q) {
      const double lo = kPi * std::pow(2.0, -j + static_cast<double>(q) / Q);
      const double hi = kPi * std::pow(2.0, -j + static_cast<double>(q + 1) / Q);
      const double wc = std::sqrt(lo * hi);
      const double sf = kGaborWidth * (hi - lo);
      ComplexField hat(dims);
      std::vector<double> raw(static_cast<std::size_t>(d)), ctr(static_cast<std::size_t>(d));
      for (std::int64_t k = 0; k < d; ++k) {
        const double w0 = 2.0 * kPi * (k <= d / 2 ? k : k - d) / static_cast<double>(d);
        double a = 0.0, b = 0.0;
        for (int m = -3; m <= 3; ++m) {
          const double w = w0 + 2.0 * kPi * m;
          a += std::exp(-0.5 * (w - wc) * (w - wc) / (sf * sf));
          b += std::exp(-0.5 * w * w / (sf * sf));
        }
        raw[static_cast<std::size_t>(k)] = a;
        ctr[static_cast<std::size_t>(k)] = b;
      }
      const double beta = raw[0] / ctr[0];
      for (std::size_t i = 0; i < raw.size(); ++i)
        hat.v[i] = cplx(raw[i] - beta * ctr[i], 0.0);
      bank.bands.push_back(BandFilter{j, q, std::move(hat)});
    }
  }

  fill_complement_low_pass(bank, kGaborLowPassCut * kPi * std::pow(2.0, -J));
  calibrate_bank(bank);
  bank.validate();
  return bank;
}

FilterBank build_shannon_bank(GridShape dims, int J) {
  dims.validate();
  const std::int64_t n = dims.cols;
  if ((n & (n - 1)) != 0) throw ConfigError("shannon bank needs a power-of-two side");
  std::int64_t log2n = 0;
  while ((std::int64_t{1} << log2n) < n) ++log2n;
  if (J != log2n) throw ConfigError("shannon bank needs J = log2(side)");

  FilterBank bank;
  bank.kind = BankKind::Shannon;
  bank.dims = dims;
  bank.J = J;
  bank.Q = 1;

  auto shell_of = [&](std::int64_t mag) -> int {
    // mag in [1, n/2]; shell j satisfies n/2^(j+1) < mag <= n/2^j.
    int j = 1;
    while (2 * mag <= (n >> j)) ++j;
    return j;
  };

  std::vector<ComplexField> hats;
  hats.reserve(static_cast<std::size_t>(J));
  for (int j = 1; j <= J; ++j) hats.emplace_back(dims);
  ComplexField lp(dims);

  const std::int64_t R = dims.rows, C = dims.cols;
  for (std::int64_t r = 0; r < R; ++r) {
    const std::int64_t kr = std::min(r, R - r);
    for (std::int64_t c = 0; c < C; ++c) {
      const std::int64_t kc = std::min(c, C - c);
      const std::int64_t mag = dims.rank == 1 ? kc : std::max(kr, kc);
      const std::size_t i = static_cast<std::size_t>(r * C + c);
      if (mag == 0) {
        lp.v[i] = cplx(1.0, 0.0);
      } else {
        hats[static_cast<std::size_t>(shell_of(mag) - 1)].v[i] = cplx(1.0, 0.0);
      }
    }
  }

  for (int j = 1; j <= J; ++j)
    bank.bands.push_back(BandFilter{j, 0, std::move(hats[static_cast<std::size_t>(j - 1)])});
  bank.low_pass = std::move(lp);
  bank.gamma = littlewood_paley_gamma(bank);
  return bank;
}

std::vector<double> littlewood_paley_sum(const FilterBank& bank) {
  const std::size_t d = static_cast<std::size_t>(bank.dims.count());
  std::vector<double> s(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) s[i] = std::norm(bank.low_pass.v[i]);
  for (const auto& b : bank.bands) {
    for (std::size_t i = 0; i < d; ++i) {
      const double m2 = std::norm(b.hat.v[i]);
      s[i] += 0.5 * m2;
      s[negated_index(bank.dims, i)] += 0.5 * m2;
    }
  }
  return s;
}

double littlewood_paley_gamma(const FilterBank& bank) {
  double g = 0.0;
  for (double s : littlewood_paley_sum(bank)) g = std::max(g, std::fabs(s - 1.0));
  return g;
}

ComplexField spatial_taps(const ComplexField& hat) { return ifft(hat); }

}  // namespace mcgd
