// Copyright 2026 The vhfasr Authors.
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <vector>

#include "vhfasr/audio_io.h"
#include "vhfasr/error.h"

namespace vhfasr {
namespace {

// Phase tables beyond this many coefficients are evaluated on the fly.
constexpr std::size_t kMaxTableCoefficients = 1 << 22;

class SincKernel {
 public:
  SincKernel(double cutoff, double half_width, double beta)
      : cutoff_(cutoff),
        half_width_(half_width),
        beta_(beta),
        norm_(1.0 / std::cyl_bessel_i(0.0, beta)) {}

  // x in input samples.
  double operator()(double x) const {
    const double ax = std::abs(x);
    if (ax >= half_width_) return 0.0;
    const double u = cutoff_ * x;
    const double sinc =
        u == 0.0 ? 1.0 : std::sin(std::numbers::pi * u) / (std::numbers::pi * u);
    const double r = ax / half_width_;
    const double window = std::cyl_bessel_i(0.0, beta_ * std::sqrt(1.0 - r * r)) * norm_;
    return cutoff_ * sinc * window;
  }

 private:
  double cutoff_;
  double half_width_;
  double beta_;
  double norm_;
};

}  // namespace

AudioClip Resample(const AudioClip& clip, int target_rate_hz,
                   const ResampleOptions& options) {
  if (target_rate_hz <= 0)
    throw InvalidArgument("target rate must be positive, got " +
                          std::to_string(target_rate_hz));
  ValidateClip(clip);
  if (clip.sample_rate_hz == target_rate_hz) return clip;

  const std::int64_t g = std::gcd(clip.sample_rate_hz, target_rate_hz);
  const std::int64_t up = target_rate_hz / g;   // L
  const std::int64_t down = clip.sample_rate_hz / g;  // M

  AudioClip out;
  out.sample_rate_hz = target_rate_hz;
  const auto n_in = static_cast<std::int64_t>(clip.samples.size());
  const std::int64_t n_out = (2 * n_in * up + down) / (2 * down);
  if (n_out == 0) return out;

  const double scale = std::min(1.0, static_cast<double>(up) / down);
  const double cutoff = options.rolloff * scale;
  const double half_width = options.zero_crossings / scale;
  const SincKernel kernel(cutoff, half_width, options.kaiser_beta);

  // Output n sits at input position n*M/L = q + r/L. Taps j cover offsets
  // r/L - j for j in [-reach, reach].
  const auto reach = static_cast<std::int64_t>(std::ceil(half_width));
  const std::size_t taps = static_cast<std::size_t>(2 * reach + 1);

  auto fill_phase = [&](std::int64_t r, double* coeffs) {
    const double frac = static_cast<double>(r) / up;
    double sum = 0.0;
    for (std::size_t i = 0; i < taps; ++i) {
      const std::int64_t j = static_cast<std::int64_t>(i) - reach;
      coeffs[i] = kernel(frac - static_cast<double>(j));
      sum += coeffs[i];
    }
    // Unit DC gain in every phase.
    if (sum != 0.0)
      for (std::size_t i = 0; i < taps; ++i) coeffs[i] /= sum;
  };

  const bool tabulate = static_cast<std::size_t>(up) * taps <= kMaxTableCoefficients;
  std::vector<double> table;
  if (tabulate) {
    table.resize(static_cast<std::size_t>(up) * taps);
    for (std::int64_t r = 0; r < up; ++r) fill_phase(r, table.data() + r * taps);
  }
  std::vector<double> scratch(tabulate ? 0 : taps);

  out.samples.resize(static_cast<std::size_t>(n_out));
  const double* x = clip.samples.data();
  for (std::int64_t n = 0; n < n_out; ++n) {
    const std::int64_t q = (n * down) / up;
    const std::int64_t r = (n * down) % up;
    const double* coeffs;
    if (tabulate) {
      coeffs = table.data() + r * taps;
    } else {
      fill_phase(r, scratch.data());
      coeffs = scratch.data();
    }
    const std::int64_t first = q - reach;
    const std::int64_t lo = std::max<std::int64_t>(0, first);
    const std::int64_t hi = std::min<std::int64_t>(n_in - 1, q + reach);
    double acc = 0.0;
    for (std::int64_t k = lo; k <= hi; ++k) acc += x[k] * coeffs[k - first];
    out.samples[static_cast<std::size_t>(n)] = acc;
  }
  return out;
}

}  // namespace vhfasr
