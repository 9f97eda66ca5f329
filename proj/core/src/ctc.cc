// Copyright 2026 The vhfasr Authors.
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "vhfasr/ctc.h"

#include <algorithm>

#include "vhfasr/error.h"

namespace vhfasr {
namespace {

// Blank-interleaved target: b l1 b l2 ... lL b.
std::vector<int> ExtendTarget(std::span<const int> target) {
  std::vector<int> ext(2 * target.size() + 1, kBlankIndex);
  for (std::size_t i = 0; i < target.size(); ++i) ext[2 * i + 1] = target[i];
  return ext;
}

bool CanSkip(const std::vector<int>& ext, std::size_t s) {
  return s >= 2 && ext[s] != kBlankIndex && ext[s] != ext[s - 2];
}

Matrix<double> Forward(const Matrix<double>& lp, const std::vector<int>& ext) {
  const std::size_t frames = lp.rows();
  const std::size_t states = ext.size();
  Matrix<double> alpha(frames, states, kNegInf);
  alpha(0, 0) = lp(0, ext[0]);
  if (states > 1) alpha(0, 1) = lp(0, ext[1]);
  for (std::size_t t = 1; t < frames; ++t) {
    for (std::size_t s = 0; s < states; ++s) {
      double a = alpha(t - 1, s);
      if (s >= 1) a = LogAddExp(a, alpha(t - 1, s - 1));
      if (CanSkip(ext, s)) a = LogAddExp(a, alpha(t - 1, s - 2));
      alpha(t, s) = a == kNegInf ? kNegInf : a + lp(t, ext[s]);
    }
  }
  return alpha;
}

Matrix<double> Backward(const Matrix<double>& lp, const std::vector<int>& ext) {
  const std::size_t frames = lp.rows();
  const std::size_t states = ext.size();
  Matrix<double> beta(frames, states, kNegInf);
  const std::size_t last = frames - 1;
  beta(last, states - 1) = lp(last, ext[states - 1]);
  if (states > 1) beta(last, states - 2) = lp(last, ext[states - 2]);
  for (std::size_t t = last; t-- > 0;) {
    for (std::size_t s = 0; s < states; ++s) {
      double b = beta(t + 1, s);
      if (s + 1 < states) b = LogAddExp(b, beta(t + 1, s + 1));
      if (s + 2 < states && CanSkip(ext, s + 2)) b = LogAddExp(b, beta(t + 1, s + 2));
      beta(t, s) = b == kNegInf ? kNegInf : b + lp(t, ext[s]);
    }
  }
  return beta;
}

double EndMass(const Matrix<double>& alpha) {
  const std::size_t t = alpha.rows() - 1;
  const std::size_t s = alpha.cols();
  double p = alpha(t, s - 1);
  if (s > 1) p = LogAddExp(p, alpha(t, s - 2));
  return p;
}

}  // namespace

double LogSumExp(std::span<const double> values) {
  double m = kNegInf;
  for (double v : values) m = std::max(m, v);
  if (m == kNegInf) return kNegInf;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - m);
  return m + std::log(sum);
}

LogitsMatrix::LogitsMatrix(Matrix<double> log_probs, std::optional<double> frame_duration_s)
    : values_(std::move(log_probs)), frame_duration_s_(frame_duration_s) {
  if (values_.cols() < 2)
    throw InvalidArgument("logits need at least 2 classes, got " +
                          std::to_string(values_.cols()));
  for (std::size_t t = 0; t < values_.rows(); ++t) {
    const auto row = values_.row(t);
    for (double v : row)
      if (std::isnan(v) || v == std::numeric_limits<double>::infinity())
        throw InvalidArgument("logits frame " + std::to_string(t) +
                              " holds NaN or +inf");
    const double lse = LogSumExp(row);
    if (!(std::abs(lse) <= kRowTolerance))
      throw InvalidArgument("logits frame " + std::to_string(t) +
                            " is not a log-probability distribution (logsumexp = " +
                            std::to_string(lse) + ")");
  }
}

Matrix<double> LogSoftmax(const Matrix<double>& scores) {
  Matrix<double> out = scores;
  for (std::size_t t = 0; t < out.rows(); ++t) {
    auto row = out.row(t);
    const double lse = LogSumExp(row);
    for (auto& v : row) v -= lse;
  }
  return out;
}

void ValidateLabels(std::span<const int> labels, std::size_t classes) {
  for (int l : labels)
    if (l <= kBlankIndex || static_cast<std::size_t>(l) >= classes)
      throw InvalidArgument("label " + std::to_string(l) + " outside [1, " +
                            std::to_string(classes - 1) + "]");
}

std::size_t MinFramesForTarget(std::span<const int> target) {
  std::size_t n = target.size();
  for (std::size_t i = 1; i < target.size(); ++i)
    if (target[i] == target[i - 1]) ++n;
  return n;
}

CtcLossResult CtcLoss(const Matrix<double>& log_probs, std::span<const int> target) {
  ValidateLabels(target, log_probs.cols());
  constexpr double kInf = std::numeric_limits<double>::infinity();
  if (log_probs.rows() < MinFramesForTarget(target)) return {kInf, CtcStatus::kInfeasible};
  if (log_probs.rows() == 0) return {0.0, CtcStatus::kOk};  // empty target, no frames
  const auto ext = ExtendTarget(target);
  const double ll = EndMass(Forward(log_probs, ext));
  if (ll == kNegInf) return {kInf, CtcStatus::kZeroProbability};
  return {-ll, CtcStatus::kOk};
}

Matrix<double> CtcGrad(const Matrix<double>& log_probs, std::span<const int> target) {
  ValidateLabels(target, log_probs.cols());
  const std::size_t frames = log_probs.rows();
  const std::size_t classes = log_probs.cols();
  if (frames < MinFramesForTarget(target))
    throw InvalidArgument("CTC target needs " + std::to_string(MinFramesForTarget(target)) +
                          " frames, logits have " + std::to_string(frames));
  Matrix<double> grad(frames, classes, 0.0);
  if (frames == 0) return grad;
  const auto ext = ExtendTarget(target);
  const auto alpha = Forward(log_probs, ext);
  const auto beta = Backward(log_probs, ext);
  const double ll = EndMass(alpha);
  if (ll == kNegInf) throw InvalidArgument("CTC target has zero probability");

  std::vector<double> occupancy(classes);
  for (std::size_t t = 0; t < frames; ++t) {
    std::fill(occupancy.begin(), occupancy.end(), kNegInf);
    for (std::size_t s = 0; s < ext.size(); ++s) {
      const double ab = alpha(t, s) + beta(t, s);
      if (ab == kNegInf) continue;
      // alpha and beta both contain y_t(k).
      occupancy[ext[s]] = LogAddExp(occupancy[ext[s]], ab - log_probs(t, ext[s]));
    }
    for (std::size_t k = 0; k < classes; ++k)
      grad(t, k) = occupancy[k] == kNegInf ? 0.0 : -std::exp(occupancy[k] - ll);
  }
  return grad;
}

Matrix<double> CtcGradThroughSoftmax(const Matrix<double>& log_probs,
                                     std::span<const int> target) {
  Matrix<double> grad = CtcGrad(log_probs, target);
  for (std::size_t t = 0; t < grad.rows(); ++t) {
    auto g = grad.row(t);
    const auto lp = log_probs.row(t);
    double sum = 0.0;
    for (double v : g) sum += v;
    for (std::size_t k = 0; k < g.size(); ++k) g[k] -= std::exp(lp[k]) * sum;
  }
  return grad;
}

LabelSequence CollapsePath(std::span<const int> path) {
  LabelSequence out;
  int prev = -1;
  for (int c : path) {
    if (c != prev && c != kBlankIndex) out.push_back(c);
    prev = c;
  }
  return out;
}

LabelSequence GreedyDecode(const Matrix<double>& log_probs) {
  std::vector<int> path(log_probs.rows());
  for (std::size_t t = 0; t < log_probs.rows(); ++t) {
    const auto row = log_probs.row(t);
    path[t] = static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
  }
  return CollapsePath(path);
}

}  // namespace vhfasr
