// Copyright 2026 The vhfasr Authors.
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <gtest/gtest.h>

#include "oracles.h"
#include "test_util.h"
#include "vhfasr/ctc.h"
#include "vhfasr/error.h"
#include "vhfasr/metrics.h"

namespace vhfasr {
namespace {

using testing::Gen;

TEST(BeamTest, FullBeamFindsExhaustiveArgmax) {
  Gen gen(61);
  for (int trial = 0; trial < 200; ++trial) {
    const auto lp = gen.LogProbs(4, 3);
    const auto probs = oracle::LabelingProbabilities(lp);
    auto best = probs.begin();
    for (auto it = probs.begin(); it != probs.end(); ++it)
      if (it->second > best->second) best = it;
    BeamOptions opts;
    opts.beam_width = 81;
    const auto hyps = BeamDecode(lp, opts);
    ASSERT_FALSE(hyps.empty());
    ASSERT_EQ(hyps.front().labels, best->first);
    // No pruning happened, so every score is the exact labeling probability.
    for (const auto& h : hyps)
      ASSERT_NEAR(std::exp(h.ctc_logp), probs.at(h.labels), 1e-12);
  }
}

TEST(BeamTest, ScoresMatchCtcLossForLongerInputs) {
  Gen gen(62);
  const auto lp = gen.LogProbs(30, 6);
  BeamOptions opts;
  opts.beam_width = 8;
  for (const auto& h : BeamDecode(lp, opts)) {
    const auto r = CtcLoss(lp, h.labels);
    // Pruned prefixes can only lose mass.
    EXPECT_LE(h.ctc_logp, -r.loss + 1e-9);
  }
}

TEST(BeamTest, SortedAndDeterministic) {
  Gen gen(63);
  const auto lp = gen.LogProbs(12, 5);
  BeamOptions opts;
  opts.beam_width = 10;
  const auto a = BeamDecode(lp, opts);
  const auto b = BeamDecode(lp, opts);
  ASSERT_EQ(a.size(), 10u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].labels, b[i].labels);
    EXPECT_EQ(a[i].fused_score, b[i].fused_score);
    if (i) EXPECT_GE(a[i - 1].fused_score, a[i].fused_score);
  }
}

TEST(BeamTest, TiesBreakByLabelSequence) {
  // Uniform frames: "1" and "2" tie exactly.
  Matrix<double> lp(1, 3, std::log(1.0 / 3));
  BeamOptions opts;
  opts.beam_width = 3;
  const auto hyps = BeamDecode(lp, opts);
  ASSERT_EQ(hyps.size(), 3u);
  EXPECT_EQ(hyps[1].labels, LabelSequence{1});
  EXPECT_EQ(hyps[2].labels, LabelSequence{2});
}

TEST(BeamTest, EmptyInputAndWidthOne) {
  BeamOptions opts;
  const auto none = BeamDecode(Matrix<double>(0, 4), opts);
  ASSERT_EQ(none.size(), 1u);
  EXPECT_TRUE(none[0].labels.empty());
  EXPECT_EQ(none[0].fused_score, 0.0);
  // A frame that is certain makes beam width 1 exact.
  const std::vector<int> path{1, 1, 0, 2, 0, 2};
  Matrix<double> lp(path.size(), 3, kNegInf);
  for (std::size_t t = 0; t < path.size(); ++t) lp(t, path[t]) = 0.0;
  opts.beam_width = 1;
  const auto one = BeamDecode(lp, opts);
  EXPECT_EQ(one.front().labels, (LabelSequence{1, 2, 2}));
  EXPECT_EQ(one.front().ctc_logp, 0.0);
}

TEST(BeamTest, OptionErrors) {
  const Matrix<double> lp(2, 3, std::log(1.0 / 3));
  BeamOptions opts;
  opts.beam_width = 0;
  EXPECT_THROW(BeamDecode(lp, opts), InvalidArgument);
  opts.beam_width = 4;
  opts.alpha = 0.5;
  EXPECT_THROW(BeamDecode(lp, opts), InvalidArgument);
  opts.alpha = std::nan("");
  EXPECT_THROW(BeamDecode(lp, opts), InvalidArgument);
  const NGramModel lm = TrainNGram({"a"}, 2);
  const Vocabulary no_delim({"<blank>", "a", "b"});
  opts.alpha = 1.0;
  EXPECT_THROW(BeamDecode(lp, opts, &lm, &no_delim), InvalidArgument);
  EXPECT_THROW(BeamDecode(lp, opts, &lm, nullptr), InvalidArgument);
  const Vocabulary wrong_size({"<blank>", "|", "a", "b"});
  EXPECT_THROW(BeamDecode(lp, opts, &lm, &wrong_size), InvalidArgument);
}

// Fixture: per-frame posteriors spell "red|port" except that the final
// letter of the first word leans slightly to 't'.
struct FusionFixture {
  Vocabulary vocab{{"<blank>", "|", "d", "e", "o", "p", "r", "t"}};
  Matrix<double> logits;

  explicit FusionFixture(double t_bias = 0.55) {
    const std::string spelled = "red|port";
    std::vector<std::vector<double>> rows;
    auto index = [&](char c) {
      for (std::size_t i = 0; i < vocab.size(); ++i)
        if (vocab.label(static_cast<int>(i)) == std::string(1, c)) return i;
      return std::size_t{0};
    };
    auto frame = [&](std::vector<std::pair<std::size_t, double>> mass) {
      std::vector<double> p(vocab.size(), 0.0);
      double used = 0.0;
      for (auto [k, m] : mass) {
        p[k] += m;
        used += m;
      }
      for (auto& v : p) v = std::log(v + (1.0 - used) / static_cast<double>(vocab.size()));
      rows.push_back(p);
    };
    for (std::size_t i = 0; i < spelled.size(); ++i) {
      const char c = spelled[i];
      if (i == 2)
        frame({{index('t'), 0.9 * t_bias}, {index('d'), 0.9 * (1 - t_bias)}});
      else
        frame({{index(c), 0.9}});
      frame({{0, 0.9}});
    }
    logits = Matrix<double>(rows.size(), vocab.size(), 0.0);
    for (std::size_t t = 0; t < rows.size(); ++t)
      for (std::size_t k = 0; k < vocab.size(); ++k) logits(t, k) = rows[t][k];
  }
};

TEST(FusionTest, LanguageModelFixesAmbiguousWord) {
  const FusionFixture fx;
  const NGramModel lm = TrainNGram({"red port", "red port side", "port red"}, 2);
  BeamOptions plain;
  plain.beam_width = 16;
  const auto without = BeamDecode(fx.logits, plain, nullptr, &fx.vocab);
  EXPECT_EQ(fx.vocab.ToText(without.front().labels), "ret port");
  EXPECT_EQ(fx.vocab.ToText(GreedyDecode(fx.logits)), "ret port");
  BeamOptions fused = plain;
  fused.alpha = 1.0;
  const auto with = BeamDecode(fx.logits, fused, &lm, &fx.vocab);
  EXPECT_EQ(fx.vocab.ToText(with.front().labels), "red port");
  EXPECT_LT(CorpusWer({{"red port", fx.vocab.ToText(with.front().labels)}}).wer,
            CorpusWer({{"red port", fx.vocab.ToText(without.front().labels)}}).wer);
}

TEST(FusionTest, AlphaZeroMatchesPlainSearch) {
  Gen gen(64);
  const Vocabulary vocab({"<blank>", "|", "a", "b", "c"});
  const NGramModel lm = TrainNGram({"ab c", "c cab", "ba"}, 3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto lp = gen.LogProbs(10, 5);
    BeamOptions opts;
    opts.beam_width = 8;
    const auto plain = BeamDecode(lp, opts, nullptr, &vocab);
    const auto zero = BeamDecode(lp, opts, &lm, &vocab);
    ASSERT_EQ(plain.size(), zero.size());
    for (std::size_t i = 0; i < plain.size(); ++i) {
      EXPECT_EQ(plain[i].labels, zero[i].labels);
      EXPECT_EQ(plain[i].fused_score, zero[i].fused_score);
    }
  }
}

// The LM score of a finished hypothesis is alpha times the LM's sentence
// score plus beta per word, whatever the label segmentation.
TEST(FusionTest, FinalLmScoreIsSentenceScore) {
  Gen gen(65);
  const Vocabulary vocab({"<blank>", "|", "a", "b"});
  const NGramModel lm = TrainNGram({"ab a", "b ab", "a"}, 2);
  BeamOptions opts;
  opts.beam_width = 12;
  opts.alpha = 0.7;
  opts.beta = 0.3;
  for (int trial = 0; trial < 10; ++trial) {
    const auto hyps = BeamDecode(gen.LogProbs(8, 4), opts, &lm, &vocab);
    for (const auto& h : hyps) {
      const auto words = SplitWords(vocab.ToText(h.labels));
      const double want = opts.alpha * lm.ScoreSequence(words) +
                          opts.beta * static_cast<double>(words.size());
      ASSERT_NEAR(h.lm_score, want, 1e-9);
      ASSERT_NEAR(h.fused_score, h.ctc_logp + h.lm_score, 1e-12);
    }
  }
}

}  // namespace
}  // namespace vhfasr
