// Copyright 2026 The vhfasr Authors.
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef VHFASR_AUDIO_IO_H_
#define VHFASR_AUDIO_IO_H_

#include <cstdint>
#include <filesystem>
#include <vector>

namespace vhfasr {

inline constexpr int kModelSampleRateHz = 16000;

// Mono waveform. Samples are nominally in [-1, 1].
struct AudioClip {
  std::vector<double> samples;
  int sample_rate_hz = kModelSampleRateHz;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  double duration_s() const {
    return static_cast<double>(samples.size()) / sample_rate_hz;
  }
};

// Throws InvalidArgument if the rate is not positive or a sample is not
// finite.
void ValidateClip(const AudioClip& clip);

enum class WavEncoding { kPcm16, kFloat32 };

// Reads a RIFF/WAVE file with PCM-16/24/32 or IEEE float-32 samples
// (WAVE_FORMAT_EXTENSIBLE included). Channels are averaged to mono and
// integer samples are divided by 2^(bits-1).
//
// Throws FileNotFound, FormatError (bad RIFF structure) or UnsupportedCodec.
AudioClip ReadWav(const std::filesystem::path& path);

// Writes a mono WAV file. PCM-16 output clips to [-1, 1) and rounds to the
// nearest step of 1/32768; float32 output is exact for samples that are
// representable as float. Throws IoError if the path cannot be written.
void WriteWav(const AudioClip& clip, const std::filesystem::path& path,
              WavEncoding encoding = WavEncoding::kPcm16);

struct ResampleOptions {
  int zero_crossings = 64;
  double kaiser_beta = 12.9846;
  // Passband edge as a fraction of the lower Nyquist frequency.
  double rolloff = 0.945;
};

// Band-limited Kaiser-windowed sinc resampling. The ratio target/source is
// reduced to L/M and the filter is evaluated as L polyphase branches. The
// output holds round(n * target / source) samples. Identity when the rates
// already match.
AudioClip Resample(const AudioClip& clip, int target_rate_hz,
                   const ResampleOptions& options = {});

}  // namespace vhfasr

#endif  // VHFASR_AUDIO_IO_H_
