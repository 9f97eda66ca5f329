// Copyright 2026 The vhfasr Authors.
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef VHFASR_TOOLS_CLI_COMMANDS_H_
#define VHFASR_TOOLS_CLI_COMMANDS_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "vhfasr/audio_io.h"
#include "vhfasr/dataset.h"
#include "vhfasr/noisegate.h"

namespace vhfasr::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitPartialFailure = 1,
  kExitInvalidInput = 2,
};

struct GlobalOptions {
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  bool quiet = false;
};

// Diagnostics sink. Warnings are dropped under --quiet, errors never are.
class Console {
 public:
  Console(std::ostream& out, std::ostream& err, bool quiet)
      : out_(out), err_(err), quiet_(quiet) {}

  std::ostream& out() { return out_; }
  void Info(const std::string& msg);
  void Warn(const std::string& msg);
  void Error(const std::string& msg);

 private:
  std::ostream& out_;
  std::ostream& err_;
  bool quiet_;
};

struct PreprocessOptions {
  std::filesystem::path manifest;
  std::filesystem::path out_dir;
  int target_rate_hz = kModelSampleRateHz;
  GateConfig gate;
  // Stationary mode: take the noise profile from the first seconds of each
  // clip. 0 estimates it from the whole clip.
  double noise_prefix_s = 0.0;
  std::filesystem::path lexicon;  // extra rewrite lexicon, optional
  WavEncoding encoding = WavEncoding::kPcm16;
};

// Writes <out_dir>/<id>.wav and <out_dir>/manifest.jsonl sorted by id.
// Audio paths in the input resolve against the manifest's directory.
int RunPreprocess(const PreprocessOptions& opts, const GlobalOptions& global,
                  Console& console);

struct SplitOptions {
  std::filesystem::path manifest;
  std::filesystem::path out_dir;
  double test_ratio = 0.10;
  double val_ratio = 0.20;
  SplitBy by = SplitBy::kCount;
};

// Writes train.jsonl, validation.jsonl and test.jsonl.
int RunSplit(const SplitOptions& opts, const GlobalOptions& global, Console& console);

struct DecodeOptions {
  std::filesystem::path logits_dir;
  std::filesystem::path vocab;
  std::filesystem::path output;  // "-" or empty for stdout
  std::size_t beam = 16;         // 0 selects greedy decoding
  std::filesystem::path lm;
  double alpha = 0.0;
  double beta = 0.0;
};

// Reads every <id>.ctcl (binary) and <id>.txt (text) file in logits_dir
// and writes "id<TAB>hypothesis" lines sorted by id.
int RunDecode(const DecodeOptions& opts, const GlobalOptions& global, Console& console);

struct ScoreOptions {
  std::filesystem::path refs;
  std::filesystem::path hyps;
  std::string model = "model";
  bool per_utt = false;
  bool normalize = true;
  std::filesystem::path csv;  // empty: CSV goes to stdout after the table
};

int RunScore(const ScoreOptions& opts, const GlobalOptions& global, Console& console);

struct LmTrainOptions {
  std::filesystem::path corpus;
  std::filesystem::path output;
  int order = 3;
  double discount = 0.75;
  bool normalize = true;
};

// One sentence per line; blank lines are ignored.
int RunLmTrain(const LmTrainOptions& opts, const GlobalOptions& global, Console& console);

// Parses argv (subcommand first) and dispatches. Never throws.
int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vhfasr::cli

#endif  // VHFASR_TOOLS_CLI_COMMANDS_H_
