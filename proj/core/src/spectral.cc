// Copyright 2026 The vhfasr Authors.
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "vhfasr/spectral.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "fft.h"
#include "vhfasr/error.h"

namespace vhfasr {
namespace {

// Index into x after symmetric reflection about the end samples (numpy's
// "reflect" mode, folded repeatedly for short signals).
std::size_t ReflectIndex(std::ptrdiff_t i, std::ptrdiff_t n) {
  if (n == 1) return 0;
  const std::ptrdiff_t period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  if (i >= n) i = period - i;
  return static_cast<std::size_t>(i);
}

}  // namespace

std::string WindowName(WindowType w) {
  return w == WindowType::kHann ? "hann" : "rect";
}

WindowType ParseWindow(const std::string& name) {
  if (name == "hann") return WindowType::kHann;
  if (name == "rect" || name == "rectangular") return WindowType::kRectangular;
  throw InvalidArgument("unknown window: " + name);
}

void ValidateStftConfig(const StftConfig& config) {
  if (config.n_fft == 0 || !std::has_single_bit(config.n_fft))
    throw InvalidArgument("n_fft must be a power of two, got " +
                          std::to_string(config.n_fft));
  if (config.hop_length == 0 || config.hop_length > config.n_fft)
    throw InvalidArgument("hop_length must be in (0, n_fft], got " +
                          std::to_string(config.hop_length));
}

std::vector<double> MakeWindow(const StftConfig& config) {
  std::vector<double> w(config.n_fft, 1.0);
  if (config.window == WindowType::kHann) {
    const double n = static_cast<double>(config.n_fft);
    for (std::size_t i = 0; i < config.n_fft; ++i)
      w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / n);
  }
  return w;
}

bool IsCola(const StftConfig& config) {
  ValidateStftConfig(config);
  const auto w = MakeWindow(config);
  std::vector<double> sum(config.hop_length, 0.0);
  for (std::size_t i = 0; i < config.n_fft; ++i) sum[i % config.hop_length] += w[i];
  const auto [lo, hi] = std::minmax_element(sum.begin(), sum.end());
  return *lo > 0.0 && (*hi - *lo) <= 1e-10 * *hi;
}

std::size_t NumFrames(std::size_t n_samples, const StftConfig& config) {
  if (n_samples == 0) return 0;
  return 1 + n_samples / config.hop_length;
}

Spectrogram Stft(const AudioClip& clip, const StftConfig& config) {
  ValidateStftConfig(config);
  ValidateClip(clip);
  Spectrogram spec;
  spec.config = config;
  spec.source_rate_hz = clip.sample_rate_hz;
  const std::size_t frames = NumFrames(clip.size(), config);
  spec.values = Matrix<std::complex<double>>(frames, config.bins());
  if (frames == 0) return spec;

  const auto window = MakeWindow(config);
  const auto n = static_cast<std::ptrdiff_t>(clip.size());
  const auto pad = static_cast<std::ptrdiff_t>(config.n_fft / 2);
  internal::RealFft fft(config.n_fft);
  std::vector<double> frame(config.n_fft);
  for (std::size_t t = 0; t < frames; ++t) {
    const auto start = static_cast<std::ptrdiff_t>(t * config.hop_length) - pad;
    for (std::size_t i = 0; i < config.n_fft; ++i) {
      const auto idx = ReflectIndex(start + static_cast<std::ptrdiff_t>(i), n);
      frame[i] = clip.samples[idx] * window[i];
    }
    fft.Forward(frame, spec.values.row(t));
  }
  return spec;
}

AudioClip Istft(const Spectrogram& spec, std::size_t out_len) {
  const StftConfig& config = spec.config;
  ValidateStftConfig(config);
  if (!IsCola(config))
    throw InvalidArgument("istft requires a constant-overlap-add window/hop pair");
  if (spec.frames() > 0 && spec.bins() != config.bins())
    throw ShapeMismatch("spectrogram has " + std::to_string(spec.bins()) +
                        " bins, config expects " + std::to_string(config.bins()));

  AudioClip out;
  out.sample_rate_hz = spec.source_rate_hz;
  out.samples.assign(out_len, 0.0);
  if (spec.frames() == 0) return out;

  const auto window = MakeWindow(config);
  const std::size_t pad = config.n_fft / 2;
  const std::size_t total = (spec.frames() - 1) * config.hop_length + config.n_fft;
  std::vector<double> acc(total, 0.0);
  std::vector<double> norm(total, 0.0);
  internal::RealFft fft(config.n_fft);
  std::vector<double> frame(config.n_fft);
  const double inv_n = 1.0 / static_cast<double>(config.n_fft);
  for (std::size_t t = 0; t < spec.frames(); ++t) {
    fft.Inverse(spec.values.row(t), frame);
    const std::size_t start = t * config.hop_length;
    for (std::size_t i = 0; i < config.n_fft; ++i) {
      acc[start + i] += frame[i] * inv_n * window[i];
      norm[start + i] += window[i] * window[i];
    }
  }

  const double tiny = 1e-10;
  const std::size_t available = total > pad ? total - pad : 0;
  const std::size_t n = std::min(out_len, available);
  for (std::size_t i = 0; i < n; ++i) {
    const double w2 = norm[i + pad];
    out.samples[i] = w2 > tiny ? acc[i + pad] / w2 : 0.0;
  }
  return out;
}

DbMatrix ToDb(const Spectrogram& spec, double floor_db) {
  if (!(floor_db < 0.0))
    throw InvalidArgument("floor_db must be negative");
  DbMatrix db(spec.frames(), spec.bins());
  const auto& src = spec.values.data();
  auto& dst = db.data();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const double mag = std::abs(src[i]);
    dst[i] = mag > 0.0 ? std::max(floor_db, 20.0 * std::log10(mag)) : floor_db;
  }
  return db;
}

}  // namespace vhfasr
