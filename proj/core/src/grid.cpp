#include "mcgd/grid.hpp"

#include <cmath>
#include <string>

namespace mcgd {

void GridShape::validate() const {
  if (rank != 1 && rank != 2) throw ConfigError("grid rank must be 1 or 2");
  if (rank == 1) {
    if (rows != 1) throw ConfigError("rank-1 grid must have a single row");
    if (cols < 3) throw ConfigError("grid needs at least 3 points");
  } else {
    if (rows != cols) throw ConfigError("rank-2 grid must be square");
    if (rows < 3) throw ConfigError("grid needs at least 3 points per side");
  }
}

PeriodicSignal::PeriodicSignal(GridShape s, double fill) : shape(s) {
  s.validate();
  v.assign(static_cast<std::size_t>(s.count()), fill);
}

double PeriodicSignal::wrapped(std::int64_t r, std::int64_t c) const {
  return at(wrap_index(r, shape.rows), wrap_index(c, shape.cols));
}

ComplexField::ComplexField(GridShape s, cplx fill) : shape(s) {
  s.validate();
  v.assign(static_cast<std::size_t>(s.count()), fill);
}

namespace {

template <class Field>
Field translate_impl(const Field& x, std::int64_t dr, std::int64_t dc) {
  Field out(x.shape);
  const std::int64_t R = x.shape.rows, C = x.shape.cols;
  for (std::int64_t r = 0; r < R; ++r) {
    const std::int64_t sr = wrap_index(r - dr, R);
    for (std::int64_t c = 0; c < C; ++c) {
      out.v[static_cast<std::size_t>(r * C + c)] =
          x.v[static_cast<std::size_t>(sr * C + wrap_index(c - dc, C))];
    }
  }
  return out;
}

}  // namespace

PeriodicSignal translate(const PeriodicSignal& x, std::int64_t dr, std::int64_t dc) {
  return translate_impl(x, dr, dc);
}
ComplexField translate(const ComplexField& x, std::int64_t dr, std::int64_t dc) {
  return translate_impl(x, dr, dc);
}

ComplexField circular_convolve(const PeriodicSignal& x, const ComplexField& h_hat) {
  if (x.shape != h_hat.shape) throw ConfigError("convolution shape mismatch");
  ComplexField out = fft(x);
  for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] *= h_hat.v[i];
  fft_inplace(out, true);
  return out;
}

ComplexField circular_convolve(const ComplexField& x, const ComplexField& h_hat) {
  if (x.shape != h_hat.shape) throw ConfigError("convolution shape mismatch");
  ComplexField out = fft(x);
  for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] *= h_hat.v[i];
  fft_inplace(out, true);
  return out;
}

ComplexField periodize_filter(const FilterTaps& taps, GridShape dims) {
  dims.validate();
  if (taps.rank != dims.rank) throw ConfigError("filter taps rank mismatch");
  if (taps.rows > dims.rows || taps.cols > dims.cols)
    throw ConfigError("filter support larger than grid");
  if (taps.v.size() != static_cast<std::size_t>(taps.rows * taps.cols))
    throw ConfigError("filter taps size mismatch");

  PeriodicSignal folded(dims, 0.0);
  for (std::int64_t r = 0; r < taps.rows; ++r) {
    for (std::int64_t c = 0; c < taps.cols; ++c) {
      const std::int64_t gr = wrap_index(r - taps.origin_row, dims.rows);
      const std::int64_t gc = wrap_index(c - taps.origin_col, dims.cols);
      folded.at(gr, gc) += taps.v[static_cast<std::size_t>(r * taps.cols + c)];
    }
  }
  return fft(folded);
}

double sum(const std::vector<double>& v) {
  double s = 0.0, comp = 0.0;
  for (double x : v) {
    double y = x - comp;
    double t = s + y;
    comp = (t - s) - y;
    s = t;
  }
  return s;
}

double mean(const std::vector<double>& v) {
  return v.empty() ? 0.0 : sum(v) / static_cast<double>(v.size());
}

double l1_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += std::fabs(x);
  return s;
}

double l2_norm_sq(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

double linf_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::fabs(x));
  return s;
}

double l2_dist(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw ConfigError("l2_dist size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace mcgd
