// Copyright 2026 The vhfasr Authors.
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef VHFASR_CTC_H_
#define VHFASR_CTC_H_

#include <cmath>
#include <filesystem>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vhfasr/lm.h"
#include "vhfasr/matrix.h"

namespace vhfasr {

inline constexpr int kBlankIndex = 0;
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline double LogAddExp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  return a > b ? a + std::log1p(std::exp(b - a)) : b + std::log1p(std::exp(a - b));
}

double LogSumExp(std::span<const double> values);

// Per-frame natural-log class posteriors, T frames by V classes, class 0
// is blank.
class LogitsMatrix {
 public:
  static constexpr double kRowTolerance = 1e-3;

  LogitsMatrix() = default;
  // Throws InvalidArgument if V < 2, an entry is NaN/+inf, or a row does
  // not log-sum-exp to 0 within kRowTolerance.
  explicit LogitsMatrix(Matrix<double> log_probs,
                        std::optional<double> frame_duration_s = std::nullopt);

  const Matrix<double>& values() const { return values_; }
  std::size_t frames() const { return values_.rows(); }
  std::size_t classes() const { return values_.cols(); }
  std::optional<double> frame_duration_s() const { return frame_duration_s_; }

 private:
  Matrix<double> values_{0, 2};
  std::optional<double> frame_duration_s_;
};

// Row-wise log-softmax of raw scores.
Matrix<double> LogSoftmax(const Matrix<double>& scores);

using LabelSequence = std::vector<int>;

// Throws InvalidArgument unless every index lies in [1, classes-1].
void ValidateLabels(std::span<const int> labels, std::size_t classes);

// Minimum frames a target needs: its length plus one blank between each
// pair of equal neighbours.
std::size_t MinFramesForTarget(std::span<const int> target);

enum class CtcStatus {
  kOk,
  kInfeasible,       // target longer than the frames allow
  kZeroProbability,  // feasible, but every path has probability 0
};

struct CtcLossResult {
  double loss = 0.0;  // -ln P(target | x); +inf unless status is kOk
  CtcStatus status = CtcStatus::kOk;
};

// Negative log-likelihood of the target summed over all alignments, by the
// log-domain forward recursion over the blank-interleaved target. The input
// matrix need not be normalized.
CtcLossResult CtcLoss(const Matrix<double>& log_probs, std::span<const int> target);

// d loss / d log_probs[t][k], treating every entry as a free parameter.
// This is minus the posterior occupancy of class k at frame t. Throws
// InvalidArgument if the target is infeasible or has probability 0.
Matrix<double> CtcGrad(const Matrix<double>& log_probs, std::span<const int> target);

// Gradient with respect to raw scores when log_probs = LogSoftmax(scores):
// softmax minus occupancy. Rows sum to 0.
Matrix<double> CtcGradThroughSoftmax(const Matrix<double>& log_probs,
                                     std::span<const int> target);

// Best path: per-frame argmax (lowest index on ties), merge repeats, drop
// blanks.
LabelSequence GreedyDecode(const Matrix<double>& log_probs);
LabelSequence CollapsePath(std::span<const int> path);

// Maps class indices to output strings. Index 0 is blank; the label "|"
// (or "<space>") marks the word delimiter.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> labels);

  // One label per line in class order. The first line names the blank.
  static Vocabulary Load(const std::filesystem::path& path);
  void Save(const std::filesystem::path& path) const;

  std::size_t size() const { return labels_.size(); }
  const std::string& label(int index) const { return labels_.at(index); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<int> delimiter() const { return delimiter_; }

  // Label strings with delimiters as single spaces, trimmed.
  std::string ToText(std::span<const int> labels) const;

 private:
  std::vector<std::string> labels_;
  std::optional<int> delimiter_;
};

struct BeamOptions {
  std::size_t beam_width = 16;
  // Per completed word: alpha * log10 P_lm(word | history) + beta.
  double alpha = 0.0;
  double beta = 0.0;
};

struct Hypothesis {
  LabelSequence labels;
  double fused_score = 0.0;  // ctc_logp + lm_score
  double ctc_logp = 0.0;     // ln P(labels | x)
  double lm_score = 0.0;
};

// CTC prefix beam search that tracks blank- and non-blank-ending mass per
// prefix. Whenever the delimiter extends a prefix that ends in a non-empty
// word, that word is scored by the LM (shallow fusion). At the last frame
// an unfinished word and </s> are scored as well. Results are sorted by
// fused score, ties by ascending label sequence.
//
// Throws InvalidArgument if beam_width is 0, alpha/beta are not finite,
// alpha != 0 without an LM, or an LM is given without a vocabulary that
// defines the word delimiter.
std::vector<Hypothesis> BeamDecode(const Matrix<double>& log_probs,
                                   const BeamOptions& options,
                                   const NGramModel* lm = nullptr,
                                   const Vocabulary* vocab = nullptr);

// Binary logits: "CTCL", u16 version 1, u32 T, u32 V, then T*V float32,
// all little-endian, row-major.
void WriteLogitsBinary(const Matrix<double>& log_probs, const std::filesystem::path& path);
LogitsMatrix ReadLogitsBinary(const std::filesystem::path& path);
// Text logits: one frame per line, whitespace-separated values.
void WriteLogitsText(const Matrix<double>& log_probs, const std::filesystem::path& path);
LogitsMatrix ReadLogitsText(const std::filesystem::path& path);

}  // namespace vhfasr

#endif  // VHFASR_CTC_H_
