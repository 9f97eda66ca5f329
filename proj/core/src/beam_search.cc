// Copyright 2026 The vhfasr Authors.
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <algorithm>
#include <unordered_map>

#include "vhfasr/ctc.h"
#include "vhfasr/error.h"

namespace vhfasr {
namespace {

// Prefix trie node. LM fields are a function of the prefix alone, so they
// are computed once when the node is created.
struct PrefixNode {
  int parent = -1;
  int label = -1;
  std::size_t depth = 0;
  std::size_t word_begin = 0;  // depth at which the unfinished word starts
  double lm_score = 0.0;
  LmState lm_state;
  std::unordered_map<int, int> children;
};

struct BeamEntry {
  int node = 0;
  double log_blank = kNegInf;
  double log_nonblank = kNegInf;

  double total() const { return LogAddExp(log_blank, log_nonblank); }
};

class PrefixSearch {
 public:
  PrefixSearch(const BeamOptions& options, const NGramModel* lm, const Vocabulary* vocab)
      : options_(options), lm_(lm), vocab_(vocab) {
    PrefixNode root;
    if (lm_ != nullptr) root.lm_state = lm_->BeginState();
    nodes_.push_back(std::move(root));
    if (vocab_ != nullptr) delimiter_ = vocab_->delimiter();
  }

  std::vector<Hypothesis> Run(const Matrix<double>& lp) {
    std::vector<BeamEntry> beam{{0, 0.0, kNegInf}};
    std::unordered_map<int, std::size_t> slot;
    std::vector<BeamEntry> next;
    for (std::size_t t = 0; t < lp.rows(); ++t) {
      const auto y = lp.row(t);
      slot.clear();
      next.clear();
      auto cell = [&](int node) -> BeamEntry& {
        auto [it, inserted] = slot.try_emplace(node, next.size());
        if (inserted) next.push_back({node, kNegInf, kNegInf});
        return next[it->second];
      };
      for (const BeamEntry& e : beam) {
        const double total = e.total();
        const int last = nodes_[e.node].label;
        {
          BeamEntry& same = cell(e.node);
          same.log_blank = LogAddExp(same.log_blank, total + y[kBlankIndex]);
          if (last > 0)
            same.log_nonblank = LogAddExp(same.log_nonblank, e.log_nonblank + y[last]);
        }
        for (std::size_t c = 1; c < y.size(); ++c) {
          const int label = static_cast<int>(c);
          const int child = Child(e.node, label);
          // A repeated label only extends the prefix across a blank.
          const double from = label == last ? e.log_blank : total;
          BeamEntry& ext = cell(child);
          ext.log_nonblank = LogAddExp(ext.log_nonblank, from + y[c]);
        }
      }
      beam = Prune(next, [&](const BeamEntry& e) {
        return e.total() + nodes_[e.node].lm_score;
      });
    }

    std::vector<Hypothesis> out;
    out.reserve(beam.size());
    for (const BeamEntry& e : beam) {
      Hypothesis h;
      h.labels = Labels(e.node);
      h.ctc_logp = e.total();
      h.lm_score = FinalLmScore(e.node);
      h.fused_score = h.ctc_logp + h.lm_score;
      out.push_back(std::move(h));
    }
    std::stable_sort(out.begin(), out.end(), [](const Hypothesis& a, const Hypothesis& b) {
      if (a.fused_score != b.fused_score) return a.fused_score > b.fused_score;
      return a.labels < b.labels;
    });
    return out;
  }

 private:
  template <typename Score>
  std::vector<BeamEntry> Prune(std::vector<BeamEntry>& candidates, Score score) {
    std::vector<std::pair<double, BeamEntry>> scored;
    scored.reserve(candidates.size());
    for (const auto& e : candidates) {
      const double s = score(e);
      if (s != kNegInf) scored.emplace_back(s, e);
    }
    // Everything impossible: keep the candidates so decoding can continue.
    if (scored.empty())
      for (const auto& e : candidates) scored.emplace_back(kNegInf, e);
    auto better = [&](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return Labels(a.second.node) < Labels(b.second.node);
    };
    const std::size_t keep = std::min(options_.beam_width, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep),
                      scored.end(), better);
    std::vector<BeamEntry> kept;
    kept.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i) kept.push_back(scored[i].second);
    return kept;
  }

  int Child(int parent, int label) {
    if (const auto it = nodes_[parent].children.find(label);
        it != nodes_[parent].children.end())
      return it->second;
    PrefixNode node;
    node.parent = parent;
    node.label = label;
    node.depth = nodes_[parent].depth + 1;
    node.word_begin = nodes_[parent].word_begin;
    node.lm_score = nodes_[parent].lm_score;
    node.lm_state = nodes_[parent].lm_state;
    if (delimiter_ && label == *delimiter_) {
      const std::string word = WordText(parent);
      if (!word.empty()) node.lm_score += WordScore(node.lm_state, word, &node.lm_state);
      node.word_begin = node.depth;
    }
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(std::move(node));
    nodes_[parent].children.emplace(label, id);
    return id;
  }

  double WordScore(const LmState& state, const std::string& word, LmState* next) const {
    double s = options_.beta;
    if (lm_ != nullptr) s += options_.alpha * lm_->Score(state, word, next);
    return s;
  }

  // Text of the unfinished word at the end of the prefix ending in node.
  std::string WordText(int node) const {
    std::vector<int> labels;
    for (int n = node; n > 0 && nodes_[n].depth > nodes_[node].word_begin;
         n = nodes_[n].parent)
      labels.push_back(nodes_[n].label);
    std::reverse(labels.begin(), labels.end());
    return vocab_->ToText(labels);
  }

  double FinalLmScore(int node) const {
    const PrefixNode& n = nodes_[node];
    double score = n.lm_score;
    if (!delimiter_) return score;
    LmState state = n.lm_state;
    const std::string tail = WordText(node);
    if (!tail.empty()) score += WordScore(state, tail, &state);
    if (lm_ != nullptr) score += options_.alpha * lm_->ScoreEnd(state);
    return score;
  }

  LabelSequence Labels(int node) const {
    LabelSequence labels(nodes_[node].depth);
    for (int n = node; n > 0; n = nodes_[n].parent) labels[nodes_[n].depth - 1] = nodes_[n].label;
    return labels;
  }

  BeamOptions options_;
  const NGramModel* lm_;
  const Vocabulary* vocab_;
  std::optional<int> delimiter_;
  std::vector<PrefixNode> nodes_;
};

}  // namespace

std::vector<Hypothesis> BeamDecode(const Matrix<double>& log_probs,
                                   const BeamOptions& options, const NGramModel* lm,
                                   const Vocabulary* vocab) {
  if (options.beam_width == 0) throw InvalidArgument("beam width must be at least 1");
  if (!std::isfinite(options.alpha) || !std::isfinite(options.beta))
    throw InvalidArgument("alpha and beta must be finite");
  if (options.alpha != 0.0 && lm == nullptr)
    throw InvalidArgument("alpha != 0 requires a language model");
  if (lm != nullptr && (vocab == nullptr || !vocab->delimiter()))
    throw InvalidArgument(
        "language model fusion needs a vocabulary with a word delimiter label");
  if (vocab != nullptr && vocab->size() != log_probs.cols())
    throw InvalidArgument("vocabulary has " + std::to_string(vocab->size()) +
                          " labels, logits have " + std::to_string(log_probs.cols()) +
                          " classes");
  if (log_probs.cols() < 2) throw InvalidArgument("logits need at least 2 classes");
  return PrefixSearch(options, lm, vocab).Run(log_probs);
}

}  // namespace vhfasr
