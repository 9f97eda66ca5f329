// Copyright 2026 The vhfasr Authors.
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef VHFASR_NOISEGATE_H_
#define VHFASR_NOISEGATE_H_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "vhfasr/audio_io.h"
#include "vhfasr/spectral.h"

namespace vhfasr {

enum class GateMode { kStationary, kNonStationary };

std::string GateModeName(GateMode mode);
GateMode ParseGateMode(const std::string& name);

// Spectral gate parameters. Defaults were calibrated on a 440 Hz tone in
// white noise at 0 dB SNR (see the noise gate tests) and are frozen.
struct GateConfig {
  StftConfig stft;
  GateMode mode = GateMode::kNonStationary;
  // Stationary: a cell is signal when it exceeds mean + n_std * std.
  double n_std_thresh = 1.5;
  // Non-stationary: a cell is signal when it exceeds the smoothed
  // spectrogram by this many dB.
  double thresh_db = 7.0;
  double time_constant_s = 2.0;
  std::size_t freq_smooth_bins = 5;
  std::size_t time_smooth_frames = 5;
  double prop_decrease = 1.0;
};

void ValidateGateConfig(const GateConfig& config);

// Flat key=value encoding (one pair per line, '#' comments).
std::string GateConfigToText(const GateConfig& config);
GateConfig GateConfigFromText(const std::string& text);

struct NoiseProfile {
  std::vector<double> mean_db;
  std::vector<double> std_db;  // population standard deviation
};

// Half-open frame range [begin, end).
struct FrameRange {
  std::size_t begin = 0;
  std::size_t end = 0;
};

// Per-bin mean and standard deviation of the dB spectrogram over
// noise_frames, or over every frame when no range is given.
NoiseProfile EstimateNoiseProfile(const DbMatrix& spec_db,
                                  std::optional<FrameRange> noise_frames = {});

// Coefficient of the one-pole smoother: exp(-hop / (rate * time_constant)).
double IirCoefficient(double time_constant_s, std::size_t hop_length,
                      int sample_rate_hz);

// Zero-phase smoothing along time: y[t] = a y[t-1] + (1-a) x[t] run forward
// and then backward over each frequency bin, each pass seeded with its first
// input value.
DbMatrix SmoothTimeIir(const DbMatrix& spec_db, double time_constant_s,
                       std::size_t hop_length, int sample_rate_hz);
DbMatrix SmoothTimeIir(const DbMatrix& spec_db, double coefficient);

using Mask = Matrix<double>;

// Binary masks; 1 marks cells kept as signal. Comparisons are strict.
Mask ComputeMask(const DbMatrix& spec_db, const NoiseProfile& profile,
                 const GateConfig& config);
Mask ComputeMask(const DbMatrix& spec_db, const DbMatrix& smoothed_db,
                 const GateConfig& config);

// Normalized triangular kernel of odd extent n, e.g. [1 2 3 2 1] / 9.
std::vector<double> TriangularKernel(std::size_t n);

// Separable 2-D convolution with triangular kernels over frequency and time.
// Cells outside the mask count as zero.
Mask SmoothMask(const Mask& mask, std::size_t freq_smooth_bins,
                std::size_t time_smooth_frames);

// Scales each coefficient by 1 - prop_decrease * (1 - mask).
Spectrogram ApplyMask(const Spectrogram& spec, const Mask& mask,
                      double prop_decrease);

AudioClip ApplyMaskAndReconstruct(const Spectrogram& spec, const Mask& mask,
                                  double prop_decrease, std::size_t out_len);

// Full pipeline: STFT, dB, noise statistics (profile from noise_clip or the
// clip itself when stationary, recursive smoothing when non-stationary),
// binary mask, mask smoothing, gain and inverse STFT. The result has the
// same length and rate as the input.
AudioClip ReduceNoise(const AudioClip& clip, const GateConfig& config = {},
                      const AudioClip* noise_clip = nullptr);

}  // namespace vhfasr

#endif  // VHFASR_NOISEGATE_H_
