// Copyright 2026 The vhfasr Authors.
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef VHFASR_SRC_FFT_H_
#define VHFASR_SRC_FFT_H_

#include <complex>
#include <cstddef>
#include <span>

namespace vhfasr::internal {

// Real FFT of a fixed size backed by FFTW. Plans are created once per size
// under a global lock; execution is reentrant.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const { return n_; }
  std::size_t bins() const { return n_ / 2 + 1; }

  // in: n real samples, out: n/2+1 bins.
  void Forward(std::span<const double> in, std::span<std::complex<double>> out);
  // Unnormalized inverse: Inverse(Forward(x)) == n * x.
  void Inverse(std::span<const std::complex<double>> in, std::span<double> out);

 private:
  std::size_t n_;
  double* real_;
  void* complex_;  // fftw_complex*
  void* forward_;  // fftw_plan
  void* inverse_;
};

}  // namespace vhfasr::internal

#endif  // VHFASR_SRC_FFT_H_
