// Copyright 2026 The vhfasr Authors.
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef VHFASR_DATASET_H_
#define VHFASR_DATASET_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vhfasr/textnorm.h"

namespace vhfasr {

struct ManifestEntry {
  std::string id;
  std::string audio;
  std::string text;
  Language language = Language::kUnknown;
  std::optional<double> duration_s;

  bool operator==(const ManifestEntry&) const = default;
};

using Manifest = std::vector<ManifestEntry>;

struct ManifestOptions {
  // Run Normalize() over each transcript while loading.
  bool normalize = false;
  NormalizationRules rules = DefaultRules();
};

// JSON lines, one object per line with keys "id", "audio", "text" and the
// optional "lang" ("en", "de") and "duration_s". Blank lines are skipped.
// Throws FormatError naming the 1-based line on malformed JSON, a missing
// or mistyped field, an empty id or path, or a duplicate id.
Manifest ParseManifest(const std::string& text, const ManifestOptions& options = {});
Manifest LoadManifest(const std::filesystem::path& path, const ManifestOptions& options = {});

// Keys are written in the order id, audio, text, lang, duration_s; lang is
// left out for Language::kUnknown.
std::string ManifestToJsonl(const Manifest& manifest);
void SaveManifest(const Manifest& manifest, const std::filesystem::path& path);

// SplitMix64. Seed 0 yields 0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4,
// 0x06C45D188009454F.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t Next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0, n) by multiply-shift; n > 0.
  std::uint64_t Below(std::uint64_t n) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(Next()) * n) >> 64);
  }

 private:
  std::uint64_t state_;
};

// Fisher-Yates from the back: for i = n-1 .. 1 swap a[i] with a[Below(i+1)].
std::vector<std::size_t> ShuffledIndices(std::size_t n, std::uint64_t seed);

enum class SplitBy { kCount, kDuration };

struct SplitSpec {
  double test_ratio = 0.10;
  double val_ratio_of_train = 0.20;
  std::uint64_t seed = 0;
  SplitBy by = SplitBy::kCount;
};

void ValidateSplitSpec(const SplitSpec& spec);

// floor(x + 0.5)
std::size_t RoundHalfUp(double x);

struct DatasetSplit {
  Manifest train;
  Manifest validation;
  Manifest test;
};

// Shuffles with the seed, takes test = round(test_ratio * N) entries off
// the front, then validation = round(val_ratio_of_train * rest), and the
// remainder is train. Each split keeps the shuffled order.
//
// SplitBy::kDuration instead picks the shortest shuffled prefix whose
// summed duration is nearest the target share of hours; every entry needs
// duration_s.
//
// Throws InvalidArgument on an empty manifest, ratios outside (0, 1), or
// when any split would be empty.
DatasetSplit SplitDataset(const Manifest& manifest, const SplitSpec& spec);

}  // namespace vhfasr

#endif  // VHFASR_DATASET_H_
