// Copyright 2026 The vhfasr Authors.
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef VHFASR_LM_H_
#define VHFASR_LM_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace vhfasr {

using WordId = std::int32_t;

inline constexpr const char* kSentenceStart = "<s>";
inline constexpr const char* kSentenceEnd = "</s>";
inline constexpr const char* kUnknownWord = "<unk>";
// log10 probability written for events that can never be predicted.
inline constexpr double kLog10Zero = -99.0;

struct NGramEntry {
  double log10_prob = 0.0;
  std::optional<double> log10_backoff;
};

// Word history carried between LM lookups (at most order-1 words).
struct LmState {
  std::vector<WordId> context;
  bool operator==(const LmState&) const = default;
  auto operator<=>(const LmState&) const = default;
};

// Backoff n-gram model over words with log10 probabilities. Immutable once
// built; lookups are safe from many threads.
class NGramModel {
 public:
  using Table = std::map<std::vector<WordId>, NGramEntry>;

  NGramModel() = default;
  // tables[k-1] holds the k-grams. Words are registered from the unigram
  // table; <unk>, <s> and </s> are added when absent.
  NGramModel(std::vector<std::string> words, std::vector<Table> tables);

  int order() const { return static_cast<int>(tables_.size()); }
  bool empty() const { return tables_.empty() || tables_[0].empty(); }
  const std::vector<std::string>& words() const { return words_; }
  const std::string& word(WordId id) const { return words_[id]; }
  const std::vector<Table>& tables() const { return tables_; }

  // Out-of-vocabulary words map to <unk>.
  WordId Lookup(const std::string& word) const;
  bool Contains(const std::string& word) const;
  WordId unk() const { return unk_; }
  WordId bos() const { return bos_; }
  WordId eos() const { return eos_; }

  // log10 P(word | context) with standard backoff. Only the last order-1
  // context words are used.
  double LogProb(std::span<const WordId> context, WordId word) const;

  // log10 P(words </s> | <s>); OOV words score as <unk>.
  double ScoreSequence(const std::vector<std::string>& words) const;

  LmState BeginState() const;
  // log10 P(word | state); writes the advanced history to next.
  double Score(const LmState& state, const std::string& word, LmState* next) const;
  double ScoreEnd(const LmState& state) const;

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, WordId> ids_;
  std::vector<Table> tables_;
  WordId unk_ = -1;
  WordId bos_ = -1;
  WordId eos_ = -1;
};

inline constexpr double kDefaultDiscount = 0.75;
inline constexpr int kDefaultOrder = 3;

// Interpolated absolute discounting:
//   P(w | h) = max(c(h,w) - d, 0) / c(h) + d * N1+(h .) / c(h) * P(w | h')
// with h' the history minus its oldest word. Unigrams take
// (c(w) - d) / N and <unk> collects the discounted mass d * types / N.
// Sentences are padded with one <s> and one </s>. The backoff weight of a
// history is d * N1+(h .) / c(h), which makes the ARPA encoding exact.
// Throws InvalidArgument for an empty corpus, order < 1 or d outside (0, 1).
NGramModel TrainNGram(const std::vector<std::string>& sentences, int order = kDefaultOrder,
                      double discount = kDefaultDiscount);

// ARPA text: \data\ counts, \k-grams: sections of
// "log10prob<TAB>w1 ... wk[<TAB>log10backoff]", then \end\.
std::string ToArpa(const NGramModel& model);
NGramModel ParseArpa(const std::string& text);
void SaveArpa(const NGramModel& model, const std::filesystem::path& path);
NGramModel LoadArpa(const std::filesystem::path& path);

}  // namespace vhfasr

#endif  // VHFASR_LM_H_
