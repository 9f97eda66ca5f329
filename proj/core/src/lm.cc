// Copyright 2026 The vhfasr Authors.
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "vhfasr/lm.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "vhfasr/error.h"
#include "vhfasr/metrics.h"

namespace vhfasr {

NGramModel::NGramModel(std::vector<std::string> words, std::vector<Table> tables)
    : words_(std::move(words)), tables_(std::move(tables)) {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (!ids_.emplace(words_[i], static_cast<WordId>(i)).second)
      throw InvalidArgument("duplicate word in vocabulary: " + words_[i]);
  }
  if (tables_.empty()) tables_.emplace_back();
  auto ensure = [&](const char* w) {
    auto it = ids_.find(w);
    if (it != ids_.end()) return it->second;
    const auto id = static_cast<WordId>(words_.size());
    words_.emplace_back(w);
    ids_.emplace(w, id);
    tables_[0].emplace(std::vector<WordId>{id}, NGramEntry{kLog10Zero, std::nullopt});
    return id;
  };
  unk_ = ensure(kUnknownWord);
  bos_ = ensure(kSentenceStart);
  eos_ = ensure(kSentenceEnd);
}

WordId NGramModel::Lookup(const std::string& word) const {
  const auto it = ids_.find(word);
  return it == ids_.end() ? unk_ : it->second;
}

bool NGramModel::Contains(const std::string& word) const { return ids_.count(word) > 0; }

double NGramModel::LogProb(std::span<const WordId> context, WordId word) const {
  const std::size_t max_ctx = tables_.size() - 1;
  if (context.size() > max_ctx) context = context.subspan(context.size() - max_ctx);
  double backoff = 0.0;
  std::vector<WordId> key;
  while (true) {
    key.assign(context.begin(), context.end());
    key.push_back(word);
    const Table& table = tables_[context.size()];
    if (const auto it = table.find(key); it != table.end())
      return backoff + it->second.log10_prob;
    if (context.empty()) return backoff + kLog10Zero;
    const Table& lower = tables_[context.size() - 1];
    key.pop_back();
    if (const auto it = lower.find(key); it != lower.end() && it->second.log10_backoff)
      backoff += *it->second.log10_backoff;
    context = context.subspan(1);
  }
}

LmState NGramModel::BeginState() const {
  LmState s;
  if (order() > 1) s.context.push_back(bos_);
  return s;
}

double NGramModel::Score(const LmState& state, const std::string& word,
                         LmState* next) const {
  const WordId id = Lookup(word);
  const double lp = LogProb(state.context, id);
  if (next != nullptr) {
    LmState advanced = state;
    advanced.context.push_back(id);
    const std::size_t keep = tables_.size() - 1;
    if (advanced.context.size() > keep)
      advanced.context.erase(advanced.context.begin(),
                             advanced.context.end() - static_cast<std::ptrdiff_t>(keep));
    *next = std::move(advanced);
  }
  return lp;
}

double NGramModel::ScoreEnd(const LmState& state) const {
  return LogProb(state.context, eos_);
}

double NGramModel::ScoreSequence(const std::vector<std::string>& words) const {
  LmState state = BeginState();
  double total = 0.0;
  for (const auto& w : words) total += Score(state, w, &state);
  return total + ScoreEnd(state);
}

NGramModel TrainNGram(const std::vector<std::string>& sentences, int order,
                      double discount) {
  if (order < 1) throw InvalidArgument("n-gram order must be >= 1");
  if (!(discount > 0.0 && discount < 1.0))
    throw InvalidArgument("discount must be in (0, 1)");

  std::vector<std::vector<std::string>> tokenized;
  std::set<std::string> vocab;
  for (const auto& s : sentences) {
    auto words = SplitWords(s);
    for (const auto& w : words) vocab.insert(w);
    tokenized.push_back(std::move(words));
  }
  if (tokenized.empty()) throw InvalidArgument("cannot train on an empty corpus");

  std::vector<std::string> words{kUnknownWord, kSentenceStart, kSentenceEnd};
  for (const auto& w : vocab)
    if (w != kUnknownWord && w != kSentenceStart && w != kSentenceEnd) words.push_back(w);
  std::unordered_map<std::string, WordId> ids;
  for (std::size_t i = 0; i < words.size(); ++i) ids[words[i]] = static_cast<WordId>(i);
  const WordId unk = 0, bos = 1, eos = 2;

  // counts[k-1][(h, w)]
  const auto n = static_cast<std::size_t>(order);
  std::vector<std::map<std::vector<WordId>, double>> counts(n);
  for (const auto& sent : tokenized) {
    std::vector<WordId> padded{bos};
    for (const auto& w : sent) padded.push_back(ids.at(w));
    padded.push_back(eos);
    for (std::size_t i = 1; i < padded.size(); ++i)
      for (std::size_t k = 1; k <= n && k <= i + 1; ++k)
        counts[k - 1][std::vector<WordId>(padded.begin() + (i + 1 - k),
                                          padded.begin() + (i + 1))] += 1.0;
  }

  std::vector<NGramModel::Table> tables(n);

  double total = 0.0;
  for (const auto& [key, c] : counts[0]) total += c;
  const double types = static_cast<double>(counts[0].size());
  for (const auto& [key, c] : counts[0])
    tables[0][key].log10_prob = std::log10((c - discount) / total);
  // <unk> holds the discounted mass, plus its own count if the corpus
  // spells it out.
  {
    double mass = discount * types / total;
    if (const auto it = counts[0].find({unk}); it != counts[0].end())
      mass += (it->second - discount) / total;
    tables[0][{unk}].log10_prob = std::log10(mass);
  }
  tables[0][{bos}].log10_prob = kLog10Zero;
  tables[0].try_emplace({eos});

  for (std::size_t k = 2; k <= n; ++k) {
    // History totals and distinct continuations.
    std::map<std::vector<WordId>, std::pair<double, double>> history;
    for (const auto& [key, c] : counts[k - 1]) {
      auto& h = history[std::vector<WordId>(key.begin(), key.end() - 1)];
      h.first += c;
      h.second += 1.0;
    }
    // Probabilities of order k-1 come from a model over the lower tables.
    NGramModel lower(words, std::vector<NGramModel::Table>(tables.begin(),
                                                           tables.begin() + (k - 1)));
    for (const auto& [key, c] : counts[k - 1]) {
      const std::vector<WordId> h(key.begin(), key.end() - 1);
      const auto& [hc, distinct] = history.at(h);
      const double gamma = discount * distinct / hc;
      const std::span<const WordId> shorter(h.data() + 1, h.size() - 1);
      const double p_lower = std::pow(10.0, lower.LogProb(shorter, key.back()));
      tables[k - 1][key].log10_prob = std::log10((c - discount) / hc + gamma * p_lower);
    }
    for (const auto& [h, stats] : history) {
      // Every history was itself counted as a (k-1)-gram.
      auto it = tables[k - 2].find(h);
      if (it == tables[k - 2].end()) throw Error("n-gram history missing from lower order");
      it->second.log10_backoff = std::log10(discount * stats.second / stats.first);
    }
  }

  return NGramModel(std::move(words), std::move(tables));
}

}  // namespace vhfasr
