// Copyright 2026 The vhfasr Authors.
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "vhfasr/audio_io.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "vhfasr/error.h"

namespace vhfasr {
namespace {

constexpr std::uint16_t kFormatPcm = 0x0001;
constexpr std::uint16_t kFormatFloat = 0x0003;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t ReadU16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t ReadU32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void PutU16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

void PutU32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

struct FormatChunk {
  std::uint16_t format_tag = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits_per_sample = 0;
  std::uint16_t block_align = 0;
};

double DecodeSample(const unsigned char* p, const FormatChunk& fmt) {
  if (fmt.format_tag == kFormatFloat) {
    float f;
    std::uint32_t bits = ReadU32(p);
    std::memcpy(&f, &bits, sizeof f);
    return f;
  }
  switch (fmt.bits_per_sample) {
    case 16:
      return static_cast<std::int16_t>(ReadU16(p)) / 32768.0;
    case 24: {
      std::int32_t v = p[0] | (p[1] << 8) | (p[2] << 16);
      if (v & 0x800000) v -= 0x1000000;
      return v / 8388608.0;
    }
    case 32:
      return static_cast<std::int32_t>(ReadU32(p)) / 2147483648.0;
  }
  return 0.0;  // unreachable, validated by the caller
}

}  // namespace

void ValidateClip(const AudioClip& clip) {
  if (clip.sample_rate_hz <= 0)
    throw InvalidArgument("sample rate must be positive, got " +
                          std::to_string(clip.sample_rate_hz));
  for (std::size_t i = 0; i < clip.samples.size(); ++i) {
    if (!std::isfinite(clip.samples[i]))
      throw InvalidArgument("non-finite sample at index " + std::to_string(i));
  }
}

AudioClip ReadWav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    if (!std::filesystem::exists(path))
      throw FileNotFound("no such file: " + path.string());
    throw IoError("cannot open " + path.string());
  }
  const std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  const auto* data = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::size_t size = bytes.size();

  if (size < 12 || std::memcmp(data, "RIFF", 4) != 0 ||
      std::memcmp(data + 8, "WAVE", 4) != 0)
    throw FormatError(path.string() + ": not a RIFF/WAVE file");

  FormatChunk fmt;
  bool have_fmt = false;
  const unsigned char* pcm = nullptr;
  std::size_t pcm_bytes = 0;

  std::size_t pos = 12;
  while (pos + 8 <= size) {
    const unsigned char* chunk = data + pos;
    const std::uint32_t chunk_size = ReadU32(chunk + 4);
    const std::size_t body = pos + 8;
    if (body + chunk_size > size) {
      // Truncated data chunks are common in the wild; keep what is there.
      if (std::memcmp(chunk, "data", 4) == 0) {
        pcm = data + body;
        pcm_bytes = size - body;
        break;
      }
      throw FormatError(path.string() + ": chunk overruns file");
    }
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (chunk_size < 16) throw FormatError(path.string() + ": short fmt chunk");
      fmt.format_tag = ReadU16(data + body);
      fmt.channels = ReadU16(data + body + 2);
      fmt.sample_rate = ReadU32(data + body + 4);
      fmt.block_align = ReadU16(data + body + 12);
      fmt.bits_per_sample = ReadU16(data + body + 14);
      if (fmt.format_tag == kFormatExtensible) {
        if (chunk_size < 40)
          throw FormatError(path.string() + ": short extensible fmt chunk");
        // First two bytes of the subformat GUID carry the real format tag.
        fmt.format_tag = ReadU16(data + body + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      pcm = data + body;
      pcm_bytes = chunk_size;
    }
    pos = body + chunk_size + (chunk_size & 1);
  }

  if (!have_fmt) throw FormatError(path.string() + ": missing fmt chunk");
  if (pcm == nullptr) throw FormatError(path.string() + ": missing data chunk");
  if (fmt.channels == 0 || fmt.sample_rate == 0)
    throw FormatError(path.string() + ": zero channels or sample rate");

  const bool pcm_ok = fmt.format_tag == kFormatPcm &&
                      (fmt.bits_per_sample == 16 || fmt.bits_per_sample == 24 ||
                       fmt.bits_per_sample == 32);
  const bool float_ok = fmt.format_tag == kFormatFloat && fmt.bits_per_sample == 32;
  if (!pcm_ok && !float_ok)
    throw UnsupportedCodec(path.string() + ": format tag " +
                           std::to_string(fmt.format_tag) + " with " +
                           std::to_string(fmt.bits_per_sample) +
                           " bits per sample is not supported");

  const std::size_t sample_bytes = fmt.bits_per_sample / 8;
  const std::size_t frame_bytes = sample_bytes * fmt.channels;
  if (fmt.block_align != 0 && fmt.block_align != frame_bytes)
    throw FormatError(path.string() + ": block align disagrees with format");

  const std::size_t frames = pcm_bytes / frame_bytes;
  AudioClip clip;
  clip.sample_rate_hz = static_cast<int>(fmt.sample_rate);
  clip.samples.resize(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    const unsigned char* frame = pcm + i * frame_bytes;
    double sum = 0.0;
    for (std::size_t c = 0; c < fmt.channels; ++c)
      sum += DecodeSample(frame + c * sample_bytes, fmt);
    double v = sum / fmt.channels;
    if (!std::isfinite(v))
      throw FormatError(path.string() + ": non-finite sample at frame " +
                        std::to_string(i));
    clip.samples[i] = v;
  }
  return clip;
}

void WriteWav(const AudioClip& clip, const std::filesystem::path& path,
              WavEncoding encoding) {
  ValidateClip(clip);
  const bool is_float = encoding == WavEncoding::kFloat32;
  const std::uint16_t bits = is_float ? 32 : 16;
  const std::uint16_t block_align = bits / 8;
  const std::uint32_t data_bytes =
      static_cast<std::uint32_t>(clip.samples.size() * block_align);

  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  PutU32(out, 36 + data_bytes);
  out += "WAVE";
  out += "fmt ";
  PutU32(out, 16);
  PutU16(out, is_float ? kFormatFloat : kFormatPcm);
  PutU16(out, 1);
  PutU32(out, static_cast<std::uint32_t>(clip.sample_rate_hz));
  PutU32(out, static_cast<std::uint32_t>(clip.sample_rate_hz) * block_align);
  PutU16(out, block_align);
  PutU16(out, bits);
  out += "data";
  PutU32(out, data_bytes);

  for (double s : clip.samples) {
    if (is_float) {
      float f = static_cast<float>(s);
      std::uint32_t u;
      std::memcpy(&u, &f, sizeof u);
      PutU32(out, u);
    } else {
      double scaled = std::nearbyint(s * 32768.0);
      scaled = std::clamp(scaled, -32768.0, 32767.0);
      PutU16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
    }
  }

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open for writing: " + path.string());
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw IoError("write failed: " + path.string());
}

}  // namespace vhfasr
