// Copyright 2026 The vhfasr Authors.
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "vhfasr/metrics.h"

#include <gtest/gtest.h>

#include "oracles.h"
#include "test_util.h"
#include "vhfasr/error.h"

namespace vhfasr {
namespace {

std::string Join(const std::vector<std::string>& w) {
  std::string s;
  for (const auto& x : w) s += (s.empty() ? "" : " ") + x;
  return s;
}

TEST(SplitWordsTest, CollapsesWhitespace) {
  EXPECT_EQ(SplitWords("  a \t b\nc  "), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_TRUE(SplitWords("   ").empty());
}

TEST(AlignTest, HandExamples) {
  const auto r = LevenshteinAlign(SplitWords("a b c"), SplitWords("a x c d"));
  EXPECT_EQ(r.ops.substitutions, 1u);
  EXPECT_EQ(r.ops.insertions, 1u);
  EXPECT_EQ(r.ops.deletions, 0u);
  EXPECT_EQ(r.ops.hits, 2u);
  EXPECT_EQ(r.ops.ref_len, 3u);
  ASSERT_EQ(r.path.size(), 4u);
  EXPECT_EQ(r.path[1].kind, EditKind::kSubstitution);
  EXPECT_EQ(*r.path[1].ref, "b");
  EXPECT_EQ(*r.path[1].hyp, "x");
  EXPECT_EQ(r.path[3].kind, EditKind::kInsertion);
  EXPECT_FALSE(r.path[3].ref.has_value());

  const auto del = LevenshteinAlign(SplitWords("a b"), {});
  EXPECT_EQ(del.ops.deletions, 2u);
  const auto ins = LevenshteinAlign({}, SplitWords("a b"));
  EXPECT_EQ(ins.ops.insertions, 2u);
  EXPECT_EQ(ins.ops.ref_len, 0u);
}

TEST(AlignTest, TieBreakPrefersSubstitution) {
  // "a b" vs "b a": two substitutions or delete+match+insert, both cost 2.
  const auto r = LevenshteinAlign(SplitWords("a b"), SplitWords("b a"));
  EXPECT_EQ(r.ops.errors(), 2u);
  EXPECT_EQ(r.ops.substitutions, 2u);
}

// Property: the alignment agrees with the recursive oracle, and the path
// is a consistent edit script.
TEST(AlignTest, MatchesRecursiveOracle) {
  testing::Gen gen(31);
  for (int trial = 0; trial < 3000; ++trial) {
    const auto ref = gen.Words(8, 5);
    const auto hyp = gen.Words(8, 5);
    const auto r = LevenshteinAlign(ref, hyp);
    const std::size_t want = oracle::EditDistance(ref, hyp);
    ASSERT_EQ(r.ops.errors(), want);
    ASSERT_EQ(EditDistance(ref, hyp), want);
    ASSERT_EQ(r.ops.ref_len, ref.size());
    ASSERT_EQ(r.ops.hits + r.ops.substitutions + r.ops.deletions, ref.size());
    ASSERT_EQ(r.ops.hyp_len(), hyp.size());
    std::vector<std::string> rebuilt_ref, rebuilt_hyp;
    for (const auto& p : r.path) {
      if (p.ref) rebuilt_ref.push_back(*p.ref);
      if (p.hyp) rebuilt_hyp.push_back(*p.hyp);
      if (p.kind == EditKind::kMatch) ASSERT_EQ(*p.ref, *p.hyp);
      if (p.kind == EditKind::kSubstitution) ASSERT_NE(*p.ref, *p.hyp);
    }
    ASSERT_EQ(rebuilt_ref, ref);
    ASSERT_EQ(rebuilt_hyp, hyp);
  }
}

TEST(AlignTest, SymmetricDistance) {
  testing::Gen gen(32);
  for (int trial = 0; trial < 500; ++trial) {
    const auto a = gen.Words(8, 4), b = gen.Words(8, 4);
    ASSERT_EQ(EditDistance(a, b), EditDistance(b, a));
  }
}

TEST(WerTest, Examples) {
  EXPECT_EQ(FormatPercent(CorpusWer({{"a b c", "a b c"}}).wer), "0.00");
  // Distance 2 over 3 reference words.
  EXPECT_EQ(FormatPercent(CorpusWer({{"port side over", "port sight"}}).wer), "66.67");
  EXPECT_EQ(FormatPercent(0.3159), "31.59");
  EXPECT_DOUBLE_EQ(CorpusWer({{"a", "b c d"}}).wer, 3.0);
}

TEST(WerTest, PoolsCountsAcrossPairs) {
  // 1 error over 1 word and 0 over 9: pooled 10%, not the 50% mean.
  const auto r = CorpusWer({{"a", "b"}, {"a b c d e f g h i", "a b c d e f g h i"}});
  EXPECT_DOUBLE_EQ(r.wer, 0.1);
  EXPECT_EQ(r.ops.ref_len, 10u);
}

TEST(WerTest, Errors) {
  EXPECT_THROW(CorpusWer({}), InvalidArgument);
  EXPECT_THROW(CorpusWer({{"", "a"}}), InvalidArgument);
}

TEST(WerTest, CorpusSumMatchesOracle) {
  testing::Gen gen(33);
  std::vector<std::pair<std::string, std::string>> pairs;
  std::size_t oracle_errors = 0, words = 0;
  for (int i = 0; i < 200; ++i) {
    const auto ref = gen.Words(8, 5), hyp = gen.Words(8, 5);
    oracle_errors += oracle::EditDistance(ref, hyp);
    words += ref.size();
    pairs.emplace_back(Join(ref), Join(hyp));
  }
  const auto r = CorpusWer(pairs);
  EXPECT_EQ(r.ops.errors(), oracle_errors);
  EXPECT_EQ(r.ops.ref_len, words);
}

TEST(ReportTest, TableAndCsv) {
  EditOps ops;
  ops.substitutions = 3;
  ops.deletions = 1;
  ops.insertions = 2;
  ops.hits = 13;
  ops.ref_len = 17;
  const std::vector<ReportRow> rows{{"marine-base", WerFromOps(ops)}};
  const std::string table = FormatWerTable(rows);
  EXPECT_EQ(table,
            "Model       | Word Error Rate (WER%)\n"
            "------------|-----------------------\n"
            "marine-base | 35.29\n");
  EXPECT_EQ(FormatWerCsv(rows),
            "model,wer_percent,substitutions,deletions,insertions,hits,ref_words\n"
            "marine-base,35.29,3,1,2,13,17\n");
  EXPECT_NE(FormatWerCsv({{"a,b", WerFromOps(ops)}}).find("\n\"a,b\",35.29,"), std::string::npos);
}

}  // namespace
}  // namespace vhfasr
