// Copyright 2026 The vhfasr Authors.
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "commands.h"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>

#include "vhfasr/ctc.h"
#include "vhfasr/error.h"
#include "vhfasr/lm.h"
#include "vhfasr/metrics.h"
#include "vhfasr/parallel.h"
#include "vhfasr/textnorm.h"

namespace vhfasr::cli {
namespace fs = std::filesystem;

void Console::Info(const std::string& msg) {
  if (!quiet_) err_ << msg << "\n";
}
void Console::Warn(const std::string& msg) {
  if (!quiet_) err_ << "warning: " << msg << "\n";
}
void Console::Error(const std::string& msg) { err_ << "error: " << msg << "\n"; }

namespace {

template <typename Fn>
int Guarded(Console& console, Fn&& fn) {
  try {
    return fn();
  } catch (const vhfasr::Error& e) {
    console.Error(e.what());
  } catch (const fs::filesystem_error& e) {
    console.Error(e.what());
  }
  return kExitInvalidInput;
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFound("cannot open " + path.string());
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void WriteFile(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

void EnsureDir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw IoError("cannot create output directory " + dir.string());
}

// Ids become file names, so they must not walk out of the output directory.
void CheckIdIsFileName(const std::string& id) {
  if (id == "." || id == ".." || id.find_first_of("/\\") != std::string::npos)
    throw InvalidArgument("utterance id '" + id + "' is not a plain file name");
}

bool SortById(const ManifestEntry& a, const ManifestEntry& b) { return a.id < b.id; }

std::size_t Jobs(const GlobalOptions& g) { return std::max<std::size_t>(1, g.jobs); }

}  // namespace

int RunPreprocess(const PreprocessOptions& opts, const GlobalOptions& global,
                  Console& console) {
  return Guarded(console, [&] {
    ValidateGateConfig(opts.gate);
    if (opts.target_rate_hz <= 0) throw InvalidArgument("target rate must be positive");
    if (opts.noise_prefix_s < 0.0) throw InvalidArgument("noise prefix must be >= 0");
    NormalizationRules rules = DefaultRules();
    if (!opts.lexicon.empty()) LoadRewriteLexicon(opts.lexicon, rules);
    const Manifest input = LoadManifest(opts.manifest);
    EnsureDir(opts.out_dir);
    const fs::path base = opts.manifest.parent_path();

    std::vector<std::optional<ManifestEntry>> done(input.size());
    std::vector<std::string> failures(input.size());
    ParallelFor(input.size(), Jobs(global), [&](std::size_t i) {
      const ManifestEntry& in = input[i];
      try {
        CheckIdIsFileName(in.id);
        fs::path audio = in.audio;
        if (audio.is_relative()) audio = base / audio;
        AudioClip clip = Resample(ReadWav(audio), opts.target_rate_hz);
        AudioClip noise;
        const AudioClip* noise_ptr = nullptr;
        if (opts.gate.mode == GateMode::kStationary && opts.noise_prefix_s > 0.0) {
          const auto n = std::min(
              clip.size(), static_cast<std::size_t>(opts.noise_prefix_s * clip.sample_rate_hz));
          noise.sample_rate_hz = clip.sample_rate_hz;
          noise.samples.assign(clip.samples.begin(),
                               clip.samples.begin() + static_cast<std::ptrdiff_t>(n));
          noise_ptr = &noise;
        }
        const AudioClip cleaned = ReduceNoise(clip, opts.gate, noise_ptr);
        const std::string name = in.id + ".wav";
        WriteWav(cleaned, opts.out_dir / name, opts.encoding);
        ManifestEntry out = in;
        out.audio = name;
        out.text = Normalize(in.text, rules);
        out.duration_s = cleaned.duration_s();
        done[i] = std::move(out);
      } catch (const std::exception& e) {
        failures[i] = in.id + " (" + in.audio + "): " + e.what();
      }
    });

    Manifest output;
    std::size_t failed = 0;
    for (std::size_t i = 0; i < input.size(); ++i) {
      if (done[i]) {
        output.push_back(std::move(*done[i]));
      } else {
        console.Error(failures[i]);
        ++failed;
      }
    }
    std::sort(output.begin(), output.end(), SortById);
    SaveManifest(output, opts.out_dir / "manifest.jsonl");
    console.Info("preprocessed " + std::to_string(output.size()) + " of " +
                 std::to_string(input.size()) + " files");
    return failed ? kExitPartialFailure : kExitOk;
  });
}

int RunSplit(const SplitOptions& opts, const GlobalOptions& global, Console& console) {
  return Guarded(console, [&] {
    const Manifest manifest = LoadManifest(opts.manifest);
    SplitSpec spec;
    spec.test_ratio = opts.test_ratio;
    spec.val_ratio_of_train = opts.val_ratio;
    spec.seed = global.seed;
    spec.by = opts.by;
    const DatasetSplit split = SplitDataset(manifest, spec);
    EnsureDir(opts.out_dir);
    SaveManifest(split.train, opts.out_dir / "train.jsonl");
    SaveManifest(split.validation, opts.out_dir / "validation.jsonl");
    SaveManifest(split.test, opts.out_dir / "test.jsonl");
    console.out() << "train " << split.train.size() << "\nvalidation "
                  << split.validation.size() << "\ntest " << split.test.size() << "\n";
    return kExitOk;
  });
}

int RunDecode(const DecodeOptions& opts, const GlobalOptions& global, Console& console) {
  return Guarded(console, [&] {
    const Vocabulary vocab = Vocabulary::Load(opts.vocab);
    std::optional<NGramModel> lm;
    if (!opts.lm.empty()) {
      if (opts.beam == 0) throw InvalidArgument("--lm needs beam search (--beam > 0)");
      lm = LoadArpa(opts.lm);
      if (!vocab.delimiter())
        throw InvalidArgument("--lm needs a vocabulary with a '|' word delimiter");
    }
    BeamOptions beam;
    beam.beam_width = opts.beam;
    beam.alpha = opts.alpha;
    beam.beta = opts.beta;
    if (opts.beam > 0) {
      // Surface option errors once, up front, instead of once per file.
      BeamDecode(Matrix<double>(0, vocab.size()), beam, lm ? &*lm : nullptr, &vocab);
    }

    if (!fs::is_directory(opts.logits_dir))
      throw FileNotFound("logits directory " + opts.logits_dir.string() + " not found");
    std::map<std::string, fs::path> files;
    for (const auto& entry : fs::directory_iterator(opts.logits_dir)) {
      if (!entry.is_regular_file()) continue;
      const fs::path& p = entry.path();
      if (p.extension() != ".ctcl" && p.extension() != ".txt") continue;
      const std::string id = p.stem().string();
      if (!files.emplace(id, p).second)
        throw InvalidArgument("two logits files for utterance '" + id + "'");
    }
    if (files.empty()) console.Warn("no logits files in " + opts.logits_dir.string());

    const std::vector<std::pair<std::string, fs::path>> work(files.begin(), files.end());
    std::vector<std::optional<std::string>> hyps(work.size());
    std::vector<std::string> failures(work.size());
    ParallelFor(work.size(), Jobs(global), [&](std::size_t i) {
      const auto& [id, path] = work[i];
      try {
        const LogitsMatrix logits =
            path.extension() == ".ctcl" ? ReadLogitsBinary(path) : ReadLogitsText(path);
        if (logits.classes() != vocab.size())
          throw FormatError(path.string() + ": " + std::to_string(logits.classes()) +
                            " classes, vocabulary has " + std::to_string(vocab.size()));
        LabelSequence labels;
        if (opts.beam == 0) {
          labels = GreedyDecode(logits.values());
        } else {
          labels = BeamDecode(logits.values(), beam, lm ? &*lm : nullptr, &vocab).front().labels;
        }
        hyps[i] = vocab.ToText(labels);
      } catch (const std::exception& e) {
        failures[i] = e.what();
      }
    });

    std::string text;
    std::size_t failed = 0;
    for (std::size_t i = 0; i < work.size(); ++i) {
      if (!hyps[i]) {
        console.Error(failures[i]);
        ++failed;
        continue;
      }
      text += work[i].first + "\t" + *hyps[i] + "\n";
    }
    if (opts.output.empty() || opts.output == "-")
      console.out() << text;
    else
      WriteFile(opts.output, text);
    return failed ? kExitPartialFailure : kExitOk;
  });
}

namespace {

std::map<std::string, std::string> ReadHypotheses(const fs::path& path) {
  std::map<std::string, std::string> hyps;
  std::istringstream in(ReadFile(path));
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    std::string id = line.substr(0, tab);
    std::string hyp = tab == std::string::npos ? "" : line.substr(tab + 1);
    if (id.empty())
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": empty id");
    if (!hyps.emplace(id, std::move(hyp)).second)
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": duplicate id '" +
                        id + "'");
  }
  return hyps;
}

}  // namespace

int RunScore(const ScoreOptions& opts, const GlobalOptions& global, Console& console) {
  return Guarded(console, [&] {
    Manifest refs = LoadManifest(opts.refs);
    const auto hyps = ReadHypotheses(opts.hyps);
    std::map<std::string, std::string> ref_text;
    for (const auto& e : refs) ref_text.emplace(e.id, e.text);
    for (const auto& [id, _] : hyps)
      if (!ref_text.count(id))
        throw InvalidArgument("hypothesis id '" + id + "' has no reference");
    for (const auto& [id, _] : ref_text)
      if (!hyps.count(id)) throw InvalidArgument("reference id '" + id + "' has no hypothesis");

    const NormalizationRules rules = DefaultRules();
    const std::vector<std::pair<std::string, std::string>> items(ref_text.begin(),
                                                                 ref_text.end());
    std::vector<EditOps> ops(items.size());
    ParallelFor(items.size(), Jobs(global), [&](std::size_t i) {
      std::string r = items[i].second;
      std::string h = hyps.at(items[i].first);
      if (opts.normalize) {
        r = Normalize(r, rules);
        h = Normalize(h, rules);
      }
      ops[i] = LevenshteinAlign(SplitWords(r), SplitWords(h)).ops;
    });
    EditOps total;
    for (const auto& o : ops) total += o;
    if (total.ref_len == 0) throw InvalidArgument("references contain no words");

    const std::vector<ReportRow> rows{{opts.model, WerFromOps(total)}};
    std::ostream& out = console.out();
    out << FormatWerTable(rows);
    if (opts.per_utt) {
      out << "\nid\twer_percent\tsubstitutions\tdeletions\tinsertions\tref_words\n";
      for (std::size_t i = 0; i < items.size(); ++i) {
        const EditOps& o = ops[i];
        const std::string wer = o.ref_len ? FormatPercent(WerFromOps(o).wer) : "n/a";
        out << items[i].first << "\t" << wer << "\t" << o.substitutions << "\t" << o.deletions
            << "\t" << o.insertions << "\t" << o.ref_len << "\n";
      }
    }
    if (opts.csv.empty())
      out << "\n" << FormatWerCsv(rows);
    else
      WriteFile(opts.csv, FormatWerCsv(rows));
    return kExitOk;
  });
}

int RunLmTrain(const LmTrainOptions& opts, const GlobalOptions&, Console& console) {
  return Guarded(console, [&] {
    std::istringstream in(ReadFile(opts.corpus));
    std::vector<std::string> sentences;
    const NormalizationRules rules = DefaultRules();
    std::string line;
    while (std::getline(in, line)) {
      if (opts.normalize) line = Normalize(line, rules);
      if (!SplitWords(line).empty()) sentences.push_back(line);
    }
    if (sentences.empty()) throw InvalidArgument("corpus " + opts.corpus.string() + " is empty");
    const NGramModel model = TrainNGram(sentences, opts.order, opts.discount);
    SaveArpa(model, opts.output);
    console.Info("trained order-" + std::to_string(opts.order) + " model on " +
                 std::to_string(sentences.size()) + " sentences, " +
                 std::to_string(model.tables()[0].size()) + " unigrams");
    return kExitOk;
  });
}

}  // namespace vhfasr::cli
