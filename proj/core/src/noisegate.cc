// Copyright 2026 The vhfasr Authors.
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "vhfasr/noisegate.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "vhfasr/error.h"

namespace vhfasr {
namespace {

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double ParseDouble(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw InvalidArgument("bad value for " + key + ": '" + value + "'");
  }
}

std::size_t ParseSize(const std::string& key, const std::string& value) {
  std::size_t v = 0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw InvalidArgument("bad value for " + key + ": '" + value + "'");
  return v;
}

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

void CheckShape(const DbMatrix& a, const Matrix<double>& b, const char* what) {
  if (!a.SameShape(b))
    throw ShapeMismatch(std::string(what) + ": " + std::to_string(a.rows()) +
                        "x" + std::to_string(a.cols()) + " vs " +
                        std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
}

}  // namespace

std::string GateModeName(GateMode mode) {
  return mode == GateMode::kStationary ? "stationary" : "nonstationary";
}

GateMode ParseGateMode(const std::string& name) {
  if (name == "stationary") return GateMode::kStationary;
  if (name == "nonstationary" || name == "non-stationary")
    return GateMode::kNonStationary;
  throw InvalidArgument("unknown gate mode: " + name);
}

void ValidateGateConfig(const GateConfig& config) {
  ValidateStftConfig(config.stft);
  if (!(config.prop_decrease >= 0.0 && config.prop_decrease <= 1.0))
    throw InvalidArgument("prop_decrease must be in [0, 1]");
  if (!(config.time_constant_s > 0.0))
    throw InvalidArgument("time_constant_s must be positive");
  if (config.freq_smooth_bins % 2 == 0 || config.time_smooth_frames % 2 == 0)
    throw InvalidArgument("mask smoothing extents must be odd and >= 1");
  if (!std::isfinite(config.n_std_thresh) || !std::isfinite(config.thresh_db))
    throw InvalidArgument("gate thresholds must be finite");
}

std::string GateConfigToText(const GateConfig& c) {
  std::ostringstream out;
  out << "n_fft=" << c.stft.n_fft << "\n"
      << "hop_length=" << c.stft.hop_length << "\n"
      << "window=" << WindowName(c.stft.window) << "\n"
      << "mode=" << GateModeName(c.mode) << "\n"
      << "n_std_thresh=" << FormatDouble(c.n_std_thresh) << "\n"
      << "thresh_db=" << FormatDouble(c.thresh_db) << "\n"
      << "time_constant_s=" << FormatDouble(c.time_constant_s) << "\n"
      << "freq_smooth_bins=" << c.freq_smooth_bins << "\n"
      << "time_smooth_frames=" << c.time_smooth_frames << "\n"
      << "prop_decrease=" << FormatDouble(c.prop_decrease) << "\n";
  return out.str();
}

GateConfig GateConfigFromText(const std::string& text) {
  GateConfig c;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = Trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidArgument("line " + std::to_string(line_no) + ": expected key=value");
    const std::string key = Trim(line.substr(0, eq));
    const std::string value = Trim(line.substr(eq + 1));
    if (key == "n_fft") c.stft.n_fft = ParseSize(key, value);
    else if (key == "hop_length") c.stft.hop_length = ParseSize(key, value);
    else if (key == "window") c.stft.window = ParseWindow(value);
    else if (key == "mode") c.mode = ParseGateMode(value);
    else if (key == "n_std_thresh") c.n_std_thresh = ParseDouble(key, value);
    else if (key == "thresh_db") c.thresh_db = ParseDouble(key, value);
    else if (key == "time_constant_s") c.time_constant_s = ParseDouble(key, value);
    else if (key == "freq_smooth_bins") c.freq_smooth_bins = ParseSize(key, value);
    else if (key == "time_smooth_frames") c.time_smooth_frames = ParseSize(key, value);
    else if (key == "prop_decrease") c.prop_decrease = ParseDouble(key, value);
    else throw InvalidArgument("unknown gate config key: " + key);
  }
  ValidateGateConfig(c);
  return c;
}

NoiseProfile EstimateNoiseProfile(const DbMatrix& spec_db,
                                  std::optional<FrameRange> noise_frames) {
  if (spec_db.rows() == 0 || spec_db.cols() == 0)
    throw InvalidArgument("cannot estimate noise statistics of an empty spectrogram");
  FrameRange range{0, spec_db.rows()};
  if (noise_frames) {
    range = *noise_frames;
    if (range.begin >= range.end || range.end > spec_db.rows())
      throw InvalidArgument("noise frame range [" + std::to_string(range.begin) +
                            ", " + std::to_string(range.end) +
                            ") is empty or out of bounds");
  }
  const std::size_t bins = spec_db.cols();
  const double count = static_cast<double>(range.end - range.begin);
  NoiseProfile profile;
  profile.mean_db.assign(bins, 0.0);
  profile.std_db.assign(bins, 0.0);
  for (std::size_t t = range.begin; t < range.end; ++t)
    for (std::size_t f = 0; f < bins; ++f) profile.mean_db[f] += spec_db(t, f);
  for (auto& m : profile.mean_db) m /= count;
  // Two-pass variance.
  for (std::size_t t = range.begin; t < range.end; ++t)
    for (std::size_t f = 0; f < bins; ++f) {
      const double d = spec_db(t, f) - profile.mean_db[f];
      profile.std_db[f] += d * d;
    }
  for (auto& s : profile.std_db) s = std::sqrt(s / count);
  return profile;
}

double IirCoefficient(double time_constant_s, std::size_t hop_length,
                      int sample_rate_hz) {
  if (!(time_constant_s > 0.0))
    throw InvalidArgument("time_constant_s must be positive");
  if (sample_rate_hz <= 0) throw InvalidArgument("sample rate must be positive");
  return std::exp(-static_cast<double>(hop_length) /
                  (static_cast<double>(sample_rate_hz) * time_constant_s));
}

DbMatrix SmoothTimeIir(const DbMatrix& spec_db, double a) {
  DbMatrix out = spec_db;
  const std::size_t frames = spec_db.rows();
  if (frames == 0) return out;
  const double b = 1.0 - a;
  for (std::size_t f = 0; f < spec_db.cols(); ++f) {
    double y = out(0, f);
    for (std::size_t t = 1; t < frames; ++t) {
      y = a * y + b * out(t, f);
      out(t, f) = y;
    }
    y = out(frames - 1, f);
    for (std::size_t t = frames - 1; t-- > 0;) {
      y = a * y + b * out(t, f);
      out(t, f) = y;
    }
  }
  return out;
}

DbMatrix SmoothTimeIir(const DbMatrix& spec_db, double time_constant_s,
                       std::size_t hop_length, int sample_rate_hz) {
  return SmoothTimeIir(spec_db,
                       IirCoefficient(time_constant_s, hop_length, sample_rate_hz));
}

Mask ComputeMask(const DbMatrix& spec_db, const NoiseProfile& profile,
                 const GateConfig& config) {
  if (profile.mean_db.size() != spec_db.cols() ||
      profile.std_db.size() != spec_db.cols())
    throw ShapeMismatch("noise profile has " +
                        std::to_string(profile.mean_db.size()) +
                        " bins, spectrogram has " + std::to_string(spec_db.cols()));
  Mask mask(spec_db.rows(), spec_db.cols(), 0.0);
  std::vector<double> threshold(spec_db.cols());
  for (std::size_t f = 0; f < threshold.size(); ++f)
    threshold[f] = profile.mean_db[f] + config.n_std_thresh * profile.std_db[f];
  for (std::size_t t = 0; t < spec_db.rows(); ++t)
    for (std::size_t f = 0; f < spec_db.cols(); ++f)
      mask(t, f) = spec_db(t, f) > threshold[f] ? 1.0 : 0.0;
  return mask;
}

Mask ComputeMask(const DbMatrix& spec_db, const DbMatrix& smoothed_db,
                 const GateConfig& config) {
  CheckShape(spec_db, smoothed_db, "smoothed spectrogram shape mismatch");
  Mask mask(spec_db.rows(), spec_db.cols(), 0.0);
  const auto& x = spec_db.data();
  const auto& s = smoothed_db.data();
  auto& m = mask.data();
  for (std::size_t i = 0; i < x.size(); ++i)
    m[i] = x[i] > s[i] + config.thresh_db ? 1.0 : 0.0;
  return mask;
}

std::vector<double> TriangularKernel(std::size_t n) {
  if (n % 2 == 0) throw InvalidArgument("kernel extent must be odd and >= 1");
  const std::size_t half = n / 2;
  std::vector<double> k(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t dist = i > half ? i - half : half - i;
    k[i] = static_cast<double>(half + 1 - dist);
    sum += k[i];
  }
  for (auto& v : k) v /= sum;
  return k;
}

Mask SmoothMask(const Mask& mask, std::size_t freq_smooth_bins,
                std::size_t time_smooth_frames) {
  const auto kf = TriangularKernel(freq_smooth_bins);
  const auto kt = TriangularKernel(time_smooth_frames);
  const auto rows = static_cast<std::ptrdiff_t>(mask.rows());
  const auto cols = static_cast<std::ptrdiff_t>(mask.cols());
  const auto hf = static_cast<std::ptrdiff_t>(kf.size() / 2);
  const auto ht = static_cast<std::ptrdiff_t>(kt.size() / 2);

  Mask along_freq(mask.rows(), mask.cols(), 0.0);
  for (std::ptrdiff_t t = 0; t < rows; ++t)
    for (std::ptrdiff_t f = 0; f < cols; ++f) {
      double acc = 0.0;
      for (std::ptrdiff_t j = -hf; j <= hf; ++j) {
        const std::ptrdiff_t g = f + j;
        if (g >= 0 && g < cols) acc += kf[j + hf] * mask(t, g);
      }
      along_freq(t, f) = acc;
    }

  Mask out(mask.rows(), mask.cols(), 0.0);
  for (std::ptrdiff_t t = 0; t < rows; ++t)
    for (std::ptrdiff_t f = 0; f < cols; ++f) {
      double acc = 0.0;
      for (std::ptrdiff_t j = -ht; j <= ht; ++j) {
        const std::ptrdiff_t s = t + j;
        if (s >= 0 && s < rows) acc += kt[j + ht] * along_freq(s, f);
      }
      out(t, f) = std::clamp(acc, 0.0, 1.0);
    }
  return out;
}

Spectrogram ApplyMask(const Spectrogram& spec, const Mask& mask,
                      double prop_decrease) {
  if (mask.rows() != spec.frames() || mask.cols() != spec.bins())
    throw ShapeMismatch("mask is " + std::to_string(mask.rows()) + "x" +
                        std::to_string(mask.cols()) + ", spectrogram is " +
                        std::to_string(spec.frames()) + "x" +
                        std::to_string(spec.bins()));
  if (!(prop_decrease >= 0.0 && prop_decrease <= 1.0))
    throw InvalidArgument("prop_decrease must be in [0, 1]");
  Spectrogram out = spec;
  auto& values = out.values.data();
  const auto& m = mask.data();
  for (std::size_t i = 0; i < values.size(); ++i)
    values[i] *= 1.0 - prop_decrease * (1.0 - m[i]);
  return out;
}

AudioClip ApplyMaskAndReconstruct(const Spectrogram& spec, const Mask& mask,
                                  double prop_decrease, std::size_t out_len) {
  return Istft(ApplyMask(spec, mask, prop_decrease), out_len);
}

AudioClip ReduceNoise(const AudioClip& clip, const GateConfig& config,
                      const AudioClip* noise_clip) {
  ValidateGateConfig(config);
  ValidateClip(clip);
  if (clip.empty()) return clip;

  const Spectrogram spec = Stft(clip, config.stft);
  const DbMatrix spec_db = ToDb(spec);
  Mask mask;
  if (config.mode == GateMode::kStationary) {
    NoiseProfile profile;
    if (noise_clip != nullptr && !noise_clip->empty()) {
      if (noise_clip->sample_rate_hz != clip.sample_rate_hz)
        throw InvalidArgument("noise clip is at " + std::to_string(noise_clip->sample_rate_hz) +
                              " Hz, clip at " + std::to_string(clip.sample_rate_hz) + " Hz");
      profile = EstimateNoiseProfile(ToDb(Stft(*noise_clip, config.stft)));
    } else {
      profile = EstimateNoiseProfile(spec_db);
    }
    mask = ComputeMask(spec_db, profile, config);
  } else {
    const DbMatrix smoothed =
        SmoothTimeIir(spec_db, config.time_constant_s, config.stft.hop_length,
                      clip.sample_rate_hz);
    mask = ComputeMask(spec_db, smoothed, config);
  }
  mask = SmoothMask(mask, config.freq_smooth_bins, config.time_smooth_frames);
  return ApplyMaskAndReconstruct(spec, mask, config.prop_decrease, clip.size());
}

}  // namespace vhfasr
