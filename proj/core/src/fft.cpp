#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

#include "mcgd/grid.hpp"

namespace mcgd {
namespace {

// Plan creation is not thread safe; execution on distinct buffers is.
// Plans are cached per (shape, direction) and reused via the new-array
// interface. FFTW_ESTIMATE keeps plan selection deterministic.
struct PlanCache {
  std::mutex mu;
  std::map<std::tuple<int, std::int64_t, std::int64_t, int>, fftw_plan> plans;

  fftw_plan get(const GridShape& s, int sign) {
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(s.rank, s.rows, s.cols, sign);
    auto it = plans.find(key);
    if (it != plans.end()) return it->second;

    // Plans must match execution in-place-ness: all call sites transform a
    // buffer in place, so the plan is created in place too.
    cplx_buffer a(static_cast<std::size_t>(s.count()));
    auto* in = reinterpret_cast<fftw_complex*>(a.data());
    fftw_plan p = nullptr;
    if (s.rank == 1) {
      p = fftw_plan_dft_1d(static_cast<int>(s.cols), in, in, sign, FFTW_ESTIMATE);
    } else {
      p = fftw_plan_dft_2d(static_cast<int>(s.rows), static_cast<int>(s.cols), in, in, sign,
                           FFTW_ESTIMATE);
    }
    if (!p) throw NumericError("fft planning failed");
    plans.emplace(key, p);
    return p;
  }
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

}  // namespace

void fft_inplace(ComplexField& x, bool inverse) {
  x.shape.validate();
  fftw_plan p = cache().get(x.shape, inverse ? FFTW_BACKWARD : FFTW_FORWARD);
  auto* buf = reinterpret_cast<fftw_complex*>(x.v.data());
  fftw_execute_dft(p, buf, buf);
  if (inverse) {
    const double inv = 1.0 / static_cast<double>(x.shape.count());
    for (auto& z : x.v) z *= inv;
  }
}

ComplexField fft(const PeriodicSignal& x) {
  x.shape.validate();
  ComplexField out(x.shape);
  for (std::size_t i = 0; i < x.v.size(); ++i) out.v[i] = cplx(x.v[i], 0.0);
  fft_inplace(out, false);
  return out;
}

ComplexField fft(const ComplexField& x) {
  ComplexField out = x;
  fft_inplace(out, false);
  return out;
}

ComplexField ifft(const ComplexField& x) {
  ComplexField out = x;
  fft_inplace(out, true);
  return out;
}

}  // namespace mcgd
