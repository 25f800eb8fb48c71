#pragma once

// Thin FFTW wrapper: process-wide plan cache plus per-thread aligned buffers.
//
// Plans are built with FFTW_ESTIMATE so that the chosen algorithm, and hence
// the floating-point result, does not depend on timing measurements.

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <span>

namespace anf::detail {

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};

template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

inline FftwBuffer<double> alloc_real(std::size_t n) {
  return FftwBuffer<double>(fftw_alloc_real(n));
}

inline FftwBuffer<fftw_complex> alloc_complex(std::size_t n) {
  return FftwBuffer<fftw_complex>(fftw_alloc_complex(n));
}

enum class FftKind { RealToComplex, ComplexToReal };

class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(FftKind kind, std::size_t n) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(kind, n);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    // FFTW planning is not thread-safe; it only ever happens under this lock.
    auto real = alloc_real(n);
    auto cplx = alloc_complex(n / 2 + 1);
    const int len = static_cast<int>(n);
    fftw_plan plan = kind == FftKind::RealToComplex
                         ? fftw_plan_dft_r2c_1d(len, real.get(), cplx.get(), FFTW_ESTIMATE)
                         : fftw_plan_dft_c2r_1d(len, cplx.get(), real.get(), FFTW_ESTIMATE);
    plans_.emplace(key, plan);
    return plan;
  }

  PlanCache(const PlanCache&) = delete;
  PlanCache& operator=(const PlanCache&) = delete;

 private:
  PlanCache() = default;
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  std::mutex mutex_;
  std::map<std::pair<FftKind, std::size_t>, fftw_plan> plans_;
};

/// Per-thread scratch for transforms of length n (reallocated on size change).
struct FftWorkspace {
  std::size_t n = 0;
  FftwBuffer<double> real;
  FftwBuffer<fftw_complex> half;

  void reserve(std::size_t len) {
    if (len == n) return;
    real = alloc_real(len);
    half = alloc_complex(len / 2 + 1);
    n = len;
  }

  static FftWorkspace& local() {
    thread_local FftWorkspace ws;
    return ws;
  }
};

/// Forward real-to-half-complex DFT: out[k] = sum_j in[j] e^{-2 pi i jk/n}.
inline void forward_real(std::span<const double> in, std::span<std::complex<double>> out) {
  const std::size_t n = in.size();
  auto& ws = FftWorkspace::local();
  ws.reserve(n);
  std::copy(in.begin(), in.end(), ws.real.get());
  fftw_execute_dft_r2c(PlanCache::instance().get(FftKind::RealToComplex, n), ws.real.get(),
                       ws.half.get());
  for (std::size_t k = 0; k < n / 2 + 1 && k < out.size(); ++k)
    out[k] = {ws.half[k][0], ws.half[k][1]};
}

}  // namespace anf::detail
