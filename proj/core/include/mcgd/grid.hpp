#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <new>
#include <vector>

#include "mcgd/errors.hpp"

namespace mcgd {

using cplx = std::complex<double>;

// 32-byte aligned allocator so FFT plans can assume SIMD-friendly buffers.
template <class T>
struct AlignedAllocator {
  using value_type = T;
  static constexpr std::size_t alignment = 32;

  AlignedAllocator() = default;
  template <class U>
  AlignedAllocator(const AlignedAllocator<U>&) {}

  T* allocate(std::size_t n) {
    if (n == 0) return nullptr;
    void* p = std::aligned_alloc(alignment, ((n * sizeof(T) + alignment - 1) / alignment) * alignment);
    if (!p) throw std::bad_alloc();
    return static_cast<T*>(p);
  }
  void deallocate(T* p, std::size_t) { std::free(p); }

  template <class U>
  bool operator==(const AlignedAllocator<U>&) const { return true; }
  template <class U>
  bool operator!=(const AlignedAllocator<U>&) const { return false; }
};

using cplx_buffer = std::vector<cplx, AlignedAllocator<cplx>>;

// Periodic grid domain: a line of d points (rank 1) or a square of n x n
// points (rank 2). Row-major layout, indices wrap modulo the side lengths.
struct GridShape {
  int rank = 1;
  std::int64_t rows = 1;  // 1 for rank-1 grids
  std::int64_t cols = 0;

  static GridShape line(std::int64_t n) { return GridShape{1, 1, n}; }
  static GridShape square(std::int64_t n) { return GridShape{2, n, n}; }

  std::int64_t count() const { return rows * cols; }
  bool operator==(const GridShape& o) const {
    return rank == o.rank && rows == o.rows && cols == o.cols;
  }
  bool operator!=(const GridShape& o) const { return !(*this == o); }

  void validate() const;
};

// Real-valued field on a periodic grid.
struct PeriodicSignal {
  GridShape shape;
  std::vector<double> v;

  PeriodicSignal() = default;
  explicit PeriodicSignal(GridShape s, double fill = 0.0);

  double& at(std::int64_t r, std::int64_t c) { return v[static_cast<std::size_t>(r * shape.cols + c)]; }
  double at(std::int64_t r, std::int64_t c) const { return v[static_cast<std::size_t>(r * shape.cols + c)]; }
  // Wrapped accessor: indices may be any integers.
  double wrapped(std::int64_t r, std::int64_t c) const;
};

// Complex field on a periodic grid; used both for spatial coefficients and
// for frequency-domain data (filter spectra, DFTs).
struct ComplexField {
  GridShape shape;
  cplx_buffer v;

  ComplexField() = default;
  explicit ComplexField(GridShape s, cplx fill = {0.0, 0.0});
};

// Compact real filter taps with an explicit origin, supported on a
// rectangle of `rows x cols` points; tap (r, c) sits at offset
// (r - origin_row, c - origin_col) from zero.
struct FilterTaps {
  int rank = 1;
  std::int64_t rows = 1;
  std::int64_t cols = 0;
  std::int64_t origin_row = 0;
  std::int64_t origin_col = 0;
  std::vector<double> v;
};

// ---- DFT ----------------------------------------------------------------
// Convention: xhat(w) = sum_u x(u) exp(-i 2 pi w.u / n); the inverse carries
// the 1/d factor, so d^-1 ||xhat||_2^2 == ||x||_2^2.

ComplexField fft(const PeriodicSignal& x);
ComplexField fft(const ComplexField& x);
ComplexField ifft(const ComplexField& x);
// In-place transform on an aligned buffer; inverse includes the 1/d factor.
void fft_inplace(ComplexField& x, bool inverse);

// ---- Grid operations ----------------------------------------------------

// (T_tau x)(u) = x(u - tau), circularly.
PeriodicSignal translate(const PeriodicSignal& x, std::int64_t dr, std::int64_t dc);
ComplexField translate(const ComplexField& x, std::int64_t dr, std::int64_t dc);

// Circular convolution with a filter given by its frequency response.
ComplexField circular_convolve(const PeriodicSignal& x, const ComplexField& h_hat);
ComplexField circular_convolve(const ComplexField& x, const ComplexField& h_hat);

// Wrap compact taps onto the grid (h_d(u) = sum_m h(u + m*n)) and return the
// frequency response. Taps wider than the grid are rejected.
ComplexField periodize_filter(const FilterTaps& taps, GridShape dims);

// ---- Small numeric helpers ----------------------------------------------

double sum(const std::vector<double>& v);           // compensated
double mean(const std::vector<double>& v);
double l1_norm(const std::vector<double>& v);
double l2_norm_sq(const std::vector<double>& v);
double linf_norm(const std::vector<double>& v);
double l2_dist(const std::vector<double>& a, const std::vector<double>& b);

inline std::int64_t wrap_index(std::int64_t i, std::int64_t n) {
  std::int64_t m = i % n;
  return m < 0 ? m + n : m;
}

}  // namespace mcgd
