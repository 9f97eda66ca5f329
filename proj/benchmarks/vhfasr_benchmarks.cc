// Copyright 2026 The vhfasr Authors.
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "vhfasr/audio_io.h"
#include "vhfasr/ctc.h"
#include "vhfasr/lm.h"
#include "vhfasr/metrics.h"
#include "vhfasr/noisegate.h"
#include "vhfasr/spectral.h"

namespace vhfasr {
namespace {

AudioClip Noise(double seconds, int rate) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal(0.0, 0.2);
  AudioClip clip;
  clip.sample_rate_hz = rate;
  clip.samples.resize(static_cast<std::size_t>(seconds * rate));
  for (auto& v : clip.samples) v = normal(rng);
  return clip;
}

Matrix<double> RandomLogProbs(std::size_t frames, std::size_t classes) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal(0.0, 2.0);
  Matrix<double> m(frames, classes, 0.0);
  for (auto& v : m.data()) v = normal(rng);
  return LogSoftmax(m);
}

void BM_Stft(benchmark::State& state) {
  const AudioClip clip = Noise(static_cast<double>(state.range(0)), 16000);
  for (auto _ : state) benchmark::DoNotOptimize(Stft(clip));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(clip.size()));
}
BENCHMARK(BM_Stft)->Arg(1)->Arg(10);

void BM_Istft(benchmark::State& state) {
  const AudioClip clip = Noise(10.0, 16000);
  const Spectrogram spec = Stft(clip);
  for (auto _ : state) benchmark::DoNotOptimize(Istft(spec, clip.size()));
}
BENCHMARK(BM_Istft);

void BM_Resample(benchmark::State& state) {
  const AudioClip clip = Noise(1.0, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Resample(clip, 16000));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(clip.size()));
}
BENCHMARK(BM_Resample)->Arg(44100)->Arg(48000)->Arg(8000);

void BM_ReduceNoise(benchmark::State& state) {
  const AudioClip clip = Noise(10.0, 16000);
  GateConfig config;
  config.mode = state.range(0) ? GateMode::kNonStationary : GateMode::kStationary;
  for (auto _ : state) benchmark::DoNotOptimize(ReduceNoise(clip, config));
}
BENCHMARK(BM_ReduceNoise)->Arg(0)->Arg(1);

void BM_CtcLoss(benchmark::State& state) {
  const auto lp = RandomLogProbs(static_cast<std::size_t>(state.range(0)), 40);
  std::vector<int> target;
  for (std::int64_t i = 0; i < state.range(0) / 4; ++i) target.push_back(1 + i % 39);
  for (auto _ : state) benchmark::DoNotOptimize(CtcLoss(lp, target));
}
BENCHMARK(BM_CtcLoss)->Arg(100)->Arg(1000);

void BM_CtcGrad(benchmark::State& state) {
  const auto lp = RandomLogProbs(500, 40);
  std::vector<int> target;
  for (int i = 0; i < 120; ++i) target.push_back(1 + i % 39);
  for (auto _ : state) benchmark::DoNotOptimize(CtcGrad(lp, target));
}
BENCHMARK(BM_CtcGrad);

void BM_BeamDecode(benchmark::State& state) {
  std::vector<std::string> labels{"<blank>", "|"};
  for (char c = 'a'; c <= 'z'; ++c) labels.emplace_back(1, c);
  const Vocabulary vocab(labels);
  const auto lp = RandomLogProbs(200, vocab.size());
  BeamOptions options;
  options.beam_width = static_cast<std::size_t>(state.range(0));
  const NGramModel lm = TrainNGram({"a b c", "b c a", "abc de f", "d e f g"}, 3);
  const bool fused = state.range(1) != 0;
  if (fused) options.alpha = 0.5;
  for (auto _ : state)
    benchmark::DoNotOptimize(BeamDecode(lp, options, fused ? &lm : nullptr, &vocab));
}
BENCHMARK(BM_BeamDecode)->Args({8, 0})->Args({32, 0})->Args({32, 1});

void BM_CorpusWer(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> word(0, 50), len(5, 30);
  std::vector<std::pair<std::string, std::string>> pairs;
  auto sentence = [&] {
    std::string s;
    for (int i = len(rng); i > 0; --i) s += "w" + std::to_string(word(rng)) + " ";
    return s;
  };
  for (int i = 0; i < 1000; ++i) pairs.emplace_back(sentence(), sentence());
  for (auto _ : state) benchmark::DoNotOptimize(CorpusWer(pairs));
}
BENCHMARK(BM_CorpusWer);

}  // namespace
}  // namespace vhfasr

BENCHMARK_MAIN();
