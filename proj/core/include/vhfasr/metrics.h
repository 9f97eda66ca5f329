// Copyright 2026 The vhfasr Authors.
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef VHFASR_METRICS_H_
#define VHFASR_METRICS_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace vhfasr {

struct EditOps {
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  std::size_t hits = 0;
  std::size_t ref_len = 0;

  std::size_t errors() const { return substitutions + deletions + insertions; }
  std::size_t hyp_len() const { return substitutions + insertions + hits; }
  EditOps& operator+=(const EditOps& o);
  bool operator==(const EditOps&) const = default;
};

enum class EditKind { kMatch, kSubstitution, kDeletion, kInsertion };

struct AlignedPair {
  std::optional<std::string> ref;
  std::optional<std::string> hyp;
  EditKind kind;
};

struct AlignmentResult {
  EditOps ops;
  std::vector<AlignedPair> path;  // in sequence order
};

std::vector<std::string> SplitWords(std::string_view text);

// Unit-cost Levenshtein alignment. When several backtrace moves are
// optimal the order of preference is match, substitution, deletion,
// insertion, so the path is deterministic.
AlignmentResult LevenshteinAlign(const std::vector<std::string>& ref,
                                 const std::vector<std::string>& hyp);

// Edit distance only, O(min(n, m)) memory.
std::size_t EditDistance(const std::vector<std::string>& ref,
                         const std::vector<std::string>& hyp);

struct WerResult {
  double wer = 0.0;  // fraction, may exceed 1
  EditOps ops;
};

// Pooled word error rate: (sum S + sum D + sum I) / sum N over whitespace
// split pairs. Throws InvalidArgument when there are no pairs or the
// references hold no words.
WerResult CorpusWer(const std::vector<std::pair<std::string, std::string>>& pairs);
WerResult WerFromOps(const EditOps& ops);

struct ReportRow {
  std::string model;
  WerResult result;
};

// "Model | Word Error Rate (WER%)" table with two decimals.
std::string FormatWerTable(const std::vector<ReportRow>& rows);
// model,wer_percent,substitutions,deletions,insertions,hits,ref_words
std::string FormatWerCsv(const std::vector<ReportRow>& rows);
std::string FormatPercent(double fraction);

}  // namespace vhfasr

#endif  // VHFASR_METRICS_H_
