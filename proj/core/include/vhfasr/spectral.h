// Copyright 2026 The vhfasr Authors.
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef VHFASR_SPECTRAL_H_
#define VHFASR_SPECTRAL_H_

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "vhfasr/audio_io.h"
#include "vhfasr/matrix.h"

namespace vhfasr {

enum class WindowType { kHann, kRectangular };

std::string WindowName(WindowType w);
// Accepts "hann" and "rect"/"rectangular". Throws InvalidArgument otherwise.
WindowType ParseWindow(const std::string& name);

struct StftConfig {
  std::size_t n_fft = 1024;
  std::size_t hop_length = 256;
  WindowType window = WindowType::kHann;

  std::size_t bins() const { return n_fft / 2 + 1; }
};

// n_fft must be a power of two and 0 < hop_length <= n_fft.
void ValidateStftConfig(const StftConfig& config);

// Periodic window of length n_fft.
std::vector<double> MakeWindow(const StftConfig& config);

// True when shifted copies of the window spaced hop_length apart sum to a
// constant.
bool IsCola(const StftConfig& config);

// Frames produced for a clip of n samples: 1 + n / hop, or 0 for n == 0.
std::size_t NumFrames(std::size_t n_samples, const StftConfig& config);

using DbMatrix = Matrix<double>;

struct Spectrogram {
  Matrix<std::complex<double>> values;  // frames x bins
  StftConfig config;
  int source_rate_hz = kModelSampleRateHz;

  std::size_t frames() const { return values.rows(); }
  std::size_t bins() const { return values.cols(); }
};

// One-sided STFT with reflect padding of n_fft/2 samples on both ends, so
// frame t is centred on sample t * hop_length.
Spectrogram Stft(const AudioClip& clip, const StftConfig& config = {});

// Weighted overlap-add inverse: each frame is windowed again and the sum
// is divided by the overlapped squared window. The result is truncated or
// zero padded to out_len samples. Throws InvalidArgument for non-COLA
// configurations.
AudioClip Istft(const Spectrogram& spec, std::size_t out_len);

inline constexpr double kDefaultDbFloor = -100.0;

// 20 log10 |X| clamped from below at floor_db (which must be negative).
DbMatrix ToDb(const Spectrogram& spec, double floor_db = kDefaultDbFloor);

}  // namespace vhfasr

#endif  // VHFASR_SPECTRAL_H_
