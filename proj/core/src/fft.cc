// Copyright 2026 The vhfasr Authors.
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "fft.h"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <mutex>

#include "vhfasr/error.h"

namespace vhfasr::internal {
namespace {

// FFTW's planner is not thread-safe.
std::mutex& PlannerMutex() {
  static std::mutex m;
  return m;
}

}  // namespace

RealFft::RealFft(std::size_t n) : n_(n) {
  if (n == 0) throw InvalidArgument("FFT size must be positive");
  std::lock_guard<std::mutex> lock(PlannerMutex());
  real_ = fftw_alloc_real(n);
  auto* cplx = fftw_alloc_complex(n / 2 + 1);
  complex_ = cplx;
  const int size = static_cast<int>(n);
  forward_ = fftw_plan_dft_r2c_1d(size, real_, cplx, FFTW_ESTIMATE);
  inverse_ = fftw_plan_dft_c2r_1d(size, cplx, real_, FFTW_ESTIMATE);
}

RealFft::~RealFft() {
  std::lock_guard<std::mutex> lock(PlannerMutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_));
  fftw_destroy_plan(static_cast<fftw_plan>(inverse_));
  fftw_free(real_);
  fftw_free(complex_);
}

void RealFft::Forward(std::span<const double> in,
                      std::span<std::complex<double>> out) {
  std::copy(in.begin(), in.end(), real_);
  fftw_execute(static_cast<fftw_plan>(forward_));
  std::memcpy(static_cast<void*>(out.data()), complex_,
              bins() * sizeof(fftw_complex));
}

void RealFft::Inverse(std::span<const std::complex<double>> in,
                      std::span<double> out) {
  std::memcpy(complex_, in.data(), bins() * sizeof(fftw_complex));
  fftw_execute(static_cast<fftw_plan>(inverse_));
  std::copy(real_, real_ + n_, out.begin());
}

}  // namespace vhfasr::internal
