// Copyright 2026 The vhfasr Authors.
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "vhfasr/dataset.h"

#include <cmath>
#include <fstream>
#include <iterator>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "vhfasr/error.h"

namespace vhfasr {
namespace {

using nlohmann::json;

std::string LineError(int line_no, const std::string& what) {
  return "manifest line " + std::to_string(line_no) + ": " + what;
}

std::string RequiredString(const json& obj, const char* key, int line_no) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw FormatError(LineError(line_no, std::string("missing \"") + key + "\""));
  if (!it->is_string())
    throw FormatError(LineError(line_no, std::string("\"") + key + "\" must be a string"));
  return it->get<std::string>();
}

// Number of leading entries of `order` whose durations sum closest to
// target, preferring the shorter prefix on ties.
std::size_t PrefixNearest(const Manifest& m, const std::vector<std::size_t>& order,
                          std::size_t begin, double target) {
  std::size_t best = 0;
  double best_gap = std::abs(target);
  double sum = 0.0;
  for (std::size_t i = begin; i < order.size(); ++i) {
    sum += *m[order[i]].duration_s;
    const double gap = std::abs(sum - target);
    if (gap < best_gap) {
      best_gap = gap;
      best = i - begin + 1;
    }
  }
  return best;
}

}  // namespace

Manifest ParseManifest(const std::string& text, const ManifestOptions& options) {
  Manifest out;
  std::unordered_set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw FormatError(LineError(line_no, std::string("malformed JSON: ") + e.what()));
    }
    if (!obj.is_object()) throw FormatError(LineError(line_no, "expected a JSON object"));
    ManifestEntry e;
    e.id = RequiredString(obj, "id", line_no);
    e.audio = RequiredString(obj, "audio", line_no);
    e.text = RequiredString(obj, "text", line_no);
    if (e.id.empty()) throw FormatError(LineError(line_no, "empty id"));
    if (e.audio.empty()) throw FormatError(LineError(line_no, "empty audio path"));
    if (const auto it = obj.find("lang"); it != obj.end() && !it->is_null()) {
      if (!it->is_string()) throw FormatError(LineError(line_no, "\"lang\" must be a string"));
      try {
        e.language = ParseLanguageTag(it->get<std::string>());
      } catch (const InvalidArgument& err) {
        throw FormatError(LineError(line_no, err.what()));
      }
    }
    if (const auto it = obj.find("duration_s"); it != obj.end() && !it->is_null()) {
      if (!it->is_number() || !(it->get<double>() >= 0.0))
        throw FormatError(LineError(line_no, "\"duration_s\" must be a non-negative number"));
      e.duration_s = it->get<double>();
    }
    if (!seen.insert(e.id).second)
      throw FormatError(LineError(line_no, "duplicate id '" + e.id + "'"));
    if (options.normalize) e.text = Normalize(e.text, options.rules);
    out.push_back(std::move(e));
  }
  return out;
}

Manifest LoadManifest(const std::filesystem::path& path, const ManifestOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFound("cannot open manifest " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return ParseManifest(text, options);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::string ManifestToJsonl(const Manifest& manifest) {
  std::string out;
  for (const auto& e : manifest) {
    nlohmann::ordered_json obj;
    obj["id"] = e.id;
    obj["audio"] = e.audio;
    obj["text"] = e.text;
    if (e.language != Language::kUnknown) obj["lang"] = LanguageTag(e.language);
    if (e.duration_s) obj["duration_s"] = *e.duration_s;
    out += obj.dump();
    out += '\n';
  }
  return out;
}

void SaveManifest(const Manifest& manifest, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << ManifestToJsonl(manifest);
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<std::size_t> ShuffledIndices(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  SplitMix64 rng(seed);
  for (std::size_t i = n; i-- > 1;) std::swap(idx[i], idx[rng.Below(i + 1)]);
  return idx;
}

std::size_t RoundHalfUp(double x) {
  // The epsilon keeps products like 0.2 * 55 from landing on 10.9999...
  return static_cast<std::size_t>(std::floor(x + 0.5 + 1e-9));
}

void ValidateSplitSpec(const SplitSpec& spec) {
  if (!(spec.test_ratio > 0.0 && spec.test_ratio < 1.0))
    throw InvalidArgument("test ratio must lie in (0, 1)");
  if (!(spec.val_ratio_of_train > 0.0 && spec.val_ratio_of_train < 1.0))
    throw InvalidArgument("validation ratio must lie in (0, 1)");
}

DatasetSplit SplitDataset(const Manifest& manifest, const SplitSpec& spec) {
  ValidateSplitSpec(spec);
  const std::size_t n = manifest.size();
  if (n == 0) throw InvalidArgument("cannot split an empty manifest");
  const auto order = ShuffledIndices(n, spec.seed);

  std::size_t n_test = 0, n_val = 0;
  if (spec.by == SplitBy::kCount) {
    n_test = RoundHalfUp(spec.test_ratio * static_cast<double>(n));
    n_test = std::min(n_test, n);
    n_val = RoundHalfUp(spec.val_ratio_of_train * static_cast<double>(n - n_test));
  } else {
    double total = 0.0;
    for (const auto& e : manifest) {
      if (!e.duration_s)
        throw InvalidArgument("duration split needs duration_s on every entry; '" + e.id +
                              "' has none");
      total += *e.duration_s;
    }
    n_test = PrefixNearest(manifest, order, 0, spec.test_ratio * total);
    double pool = 0.0;
    for (std::size_t i = n_test; i < n; ++i) pool += *manifest[order[i]].duration_s;
    n_val = PrefixNearest(manifest, order, n_test, spec.val_ratio_of_train * pool);
  }
  const std::size_t n_train = n - n_test - std::min(n_val, n - n_test);
  if (n_test == 0 || n_val == 0 || n_train == 0 || n_test + n_val > n)
    throw InvalidArgument("degenerate split for " + std::to_string(n) +
                          " entries: test " + std::to_string(n_test) + ", validation " +
                          std::to_string(n_val) + ", train " + std::to_string(n_train));

  DatasetSplit out;
  for (std::size_t i = 0; i < n; ++i) {
    const ManifestEntry& e = manifest[order[i]];
    if (i < n_test)
      out.test.push_back(e);
    else if (i < n_test + n_val)
      out.validation.push_back(e);
    else
      out.train.push_back(e);
  }
  return out;
}

}  // namespace vhfasr
