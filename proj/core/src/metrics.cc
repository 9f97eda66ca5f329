// Copyright 2026 The vhfasr Authors.
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "vhfasr/metrics.h"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "vhfasr/error.h"

namespace vhfasr {

EditOps& EditOps::operator+=(const EditOps& o) {
  substitutions += o.substitutions;
  deletions += o.deletions;
  insertions += o.insertions;
  hits += o.hits;
  ref_len += o.ref_len;
  return *this;
}

std::vector<std::string> SplitWords(std::string_view text) {
  std::vector<std::string> words;
  std::size_t i = 0;
  auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
  };
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) words.emplace_back(text.substr(start, i - start));
  }
  return words;
}

AlignmentResult LevenshteinAlign(const std::vector<std::string>& ref,
                                 const std::vector<std::string>& hyp) {
  const std::size_t n = ref.size();
  const std::size_t m = hyp.size();
  const std::size_t w = m + 1;
  std::vector<std::size_t> cost((n + 1) * w);
  for (std::size_t j = 0; j <= m; ++j) cost[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    cost[i * w] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t diag = cost[(i - 1) * w + j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      const std::size_t up = cost[(i - 1) * w + j] + 1;
      const std::size_t left = cost[i * w + j - 1] + 1;
      cost[i * w + j] = std::min({diag, up, left});
    }
  }

  AlignmentResult result;
  result.ops.ref_len = n;
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    const std::size_t here = cost[i * w + j];
    if (i > 0 && j > 0 && ref[i - 1] == hyp[j - 1] && here == cost[(i - 1) * w + j - 1]) {
      result.path.push_back({ref[i - 1], hyp[j - 1], EditKind::kMatch});
      ++result.ops.hits;
      --i;
      --j;
    } else if (i > 0 && j > 0 && here == cost[(i - 1) * w + j - 1] + 1) {
      result.path.push_back({ref[i - 1], hyp[j - 1], EditKind::kSubstitution});
      ++result.ops.substitutions;
      --i;
      --j;
    } else if (i > 0 && here == cost[(i - 1) * w + j] + 1) {
      result.path.push_back({ref[i - 1], std::nullopt, EditKind::kDeletion});
      ++result.ops.deletions;
      --i;
    } else {
      result.path.push_back({std::nullopt, hyp[j - 1], EditKind::kInsertion});
      ++result.ops.insertions;
      --j;
    }
  }
  std::reverse(result.path.begin(), result.path.end());
  return result;
}

std::size_t EditDistance(const std::vector<std::string>& ref,
                         const std::vector<std::string>& hyp) {
  const auto& a = ref.size() >= hyp.size() ? ref : hyp;
  const auto& b = ref.size() >= hyp.size() ? hyp : ref;
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = std::min({prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1), prev[j] + 1,
                         cur[j - 1] + 1});
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

WerResult WerFromOps(const EditOps& ops) {
  if (ops.ref_len == 0)
    throw InvalidArgument("WER is undefined: references contain no words");
  WerResult r;
  r.ops = ops;
  r.wer = static_cast<double>(ops.errors()) / static_cast<double>(ops.ref_len);
  return r;
}

WerResult CorpusWer(const std::vector<std::pair<std::string, std::string>>& pairs) {
  if (pairs.empty()) throw InvalidArgument("WER needs at least one pair");
  EditOps total;
  for (const auto& [ref, hyp] : pairs)
    total += LevenshteinAlign(SplitWords(ref), SplitWords(hyp)).ops;
  return WerFromOps(total);
}

std::string FormatPercent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", 100.0 * fraction);
  return buf;
}

std::string FormatWerTable(const std::vector<ReportRow>& rows) {
  static constexpr std::string_view kHeader = "Word Error Rate (WER%)";
  std::size_t model_width = 5;  // "Model"
  for (const auto& r : rows) model_width = std::max(model_width, r.model.size());
  std::ostringstream out;
  auto pad = [&](const std::string& s) {
    return s + std::string(model_width - s.size(), ' ');
  };
  out << pad("Model") << " | " << kHeader << "\n";
  out << std::string(model_width, '-') << "-|-" << std::string(kHeader.size(), '-')
      << "\n";
  for (const auto& r : rows)
    out << pad(r.model) << " | " << FormatPercent(r.result.wer) << "\n";
  return out.str();
}

std::string FormatWerCsv(const std::vector<ReportRow>& rows) {
  std::ostringstream out;
  out << "model,wer_percent,substitutions,deletions,insertions,hits,ref_words\n";
  for (const auto& r : rows) {
    std::string model = r.model;
    if (model.find_first_of(",\"\n") != std::string::npos) {
      std::string quoted = "\"";
      for (char c : model) {
        if (c == '"') quoted += '"';
        quoted += c;
      }
      model = quoted + "\"";
    }
    const auto& o = r.result.ops;
    out << model << "," << FormatPercent(r.result.wer) << "," << o.substitutions
        << "," << o.deletions << "," << o.insertions << "," << o.hits << ","
        << o.ref_len << "\n";
  }
  return out.str();
}

}  // namespace vhfasr
