// Copyright 2026 The vhfasr Authors.
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "commands.h"
#include "vhfasr/error.h"
#include "vhfasr/spectral.h"

namespace vhfasr::cli {
namespace {

constexpr const char* kConfigFlag = "--config";
constexpr const char* kDumpFlag = "--dump-config";

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

// key=value lines become "--key=value" arguments. '#' starts a comment.
std::vector<std::string> ConfigArgs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFound("cannot open config file " + path);
  std::vector<std::string> args;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos || Trim(line.substr(0, eq)).empty())
      throw FormatError(path + ":" + std::to_string(line_no) + ": expected key=value");
    const std::string key = Trim(line.substr(0, eq));
    if (key == "config" || key == "dump-config")
      throw FormatError(path + ":" + std::to_string(line_no) + ": '" + key +
                        "' cannot be set from a config file");
    const std::string value = Trim(line.substr(eq + 1));
    // An empty value means "use the default".
    if (!value.empty()) args.push_back("--" + key + "=" + value);
  }
  return args;
}

std::string OptionValue(const CLI::Option* opt) {
  if (opt->count() > 0) {
    const auto& r = opt->results();
    return r.empty() ? "" : r.back();
  }
  return opt->get_default_str();
}

using FlagVars = std::map<const CLI::Option*, const bool*>;

std::string DumpConfig(const CLI::App& app, const FlagVars& flags) {
  std::string out;
  for (const CLI::Option* opt : app.get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name == "config" || name == "dump-config") continue;
    const auto flag = flags.find(opt);
    const std::string value =
        flag != flags.end() ? (*flag->second ? "true" : "false") : OptionValue(opt);
    out += name + "=" + value + "\n";
  }
  return out;
}

struct Subcommand {
  CLI::App* app = nullptr;
  std::function<int(Console&)> run;
};

void AddFlag(CLI::App* app, const std::string& name, bool& var, const std::string& desc,
             FlagVars& flags) {
  flags[app->add_flag(name, var, desc)] = &var;
}

void AddGlobals(CLI::App* app, GlobalOptions& g, std::string& config, bool& dump,
                FlagVars& flags) {
  app->add_option("--seed", g.seed, "Random seed");
  app->add_option("--jobs", g.jobs, "Worker threads")->check(CLI::PositiveNumber);
  AddFlag(app, "--quiet", g.quiet, "Suppress warnings and progress output", flags);
  app->add_option(kConfigFlag, config, "Read key=value defaults from FILE");
  app->add_flag(kDumpFlag, dump, "Print the resolved configuration and exit");
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Maritime radio ASR toolkit: preprocessing, decoding and scoring", "vhfasr"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default()->multi_option_policy(
      CLI::MultiOptionPolicy::TakeLast);

  GlobalOptions global;
  std::string config_path;
  bool dump = false;
  FlagVars flags;
  std::map<std::string, Subcommand> subs;

  PreprocessOptions pre;
  std::string window = WindowName(pre.gate.stft.window);
  std::string mode = GateModeName(pre.gate.mode);
  std::string encoding = "pcm16";
  {
    auto* s = app.add_subcommand("preprocess", "Resample, noise-gate and normalize a manifest");
    s->add_option("--manifest", pre.manifest, "Input manifest (JSON lines)")->required();
    s->add_option("--out-dir", pre.out_dir, "Output directory")->required();
    s->add_option("--target-rate", pre.target_rate_hz, "Output sample rate in Hz");
    s->add_option("--n-fft", pre.gate.stft.n_fft, "STFT size");
    s->add_option("--hop-length", pre.gate.stft.hop_length, "STFT hop");
    s->add_option("--window", window, "STFT window")->check(CLI::IsMember({"hann", "rect"}));
    s->add_option("--mode", mode, "Gate mode")
        ->check(CLI::IsMember({"stationary", "nonstationary"}));
    s->add_option("--n-std-thresh", pre.gate.n_std_thresh, "Stationary threshold in std");
    s->add_option("--thresh-db", pre.gate.thresh_db, "Non-stationary threshold in dB");
    s->add_option("--time-constant", pre.gate.time_constant_s, "Smoother time constant, s");
    s->add_option("--freq-smooth", pre.gate.freq_smooth_bins, "Mask smoothing width, bins");
    s->add_option("--time-smooth", pre.gate.time_smooth_frames, "Mask smoothing width, frames");
    s->add_option("--prop-decrease", pre.gate.prop_decrease, "Attenuation depth in [0, 1]");
    s->add_option("--noise-prefix", pre.noise_prefix_s,
                  "Seconds of leading noise for the stationary profile (0 = whole clip)");
    s->add_option("--lexicon", pre.lexicon, "Extra umlaut rewrite lexicon (TSV)");
    s->add_option("--encoding", encoding, "Output WAV encoding")
        ->check(CLI::IsMember({"pcm16", "float32"}));
    AddGlobals(s, global, config_path, dump, flags);
    subs["preprocess"] = {s, [&](Console& c) {
                            pre.gate.stft.window = ParseWindow(window);
                            pre.gate.mode = ParseGateMode(mode);
                            pre.encoding =
                                encoding == "float32" ? WavEncoding::kFloat32 : WavEncoding::kPcm16;
                            return RunPreprocess(pre, global, c);
                          }};
  }

  SplitOptions split;
  std::string by = "count";
  {
    auto* s = app.add_subcommand("split", "Seeded train/validation/test split of a manifest");
    s->add_option("--manifest", split.manifest, "Input manifest (JSON lines)")->required();
    s->add_option("--out-dir", split.out_dir, "Output directory")->required();
    s->add_option("--test-ratio", split.test_ratio, "Share of entries held out for test");
    s->add_option("--val-ratio", split.val_ratio, "Share of the remainder used for validation");
    s->add_option("--by", by, "Split by entry count or by duration")
        ->check(CLI::IsMember({"count", "duration"}));
    AddGlobals(s, global, config_path, dump, flags);
    subs["split"] = {s, [&](Console& c) {
                       split.by = by == "duration" ? SplitBy::kDuration : SplitBy::kCount;
                       return RunSplit(split, global, c);
                     }};
  }

  DecodeOptions dec;
  {
    auto* s = app.add_subcommand("decode", "CTC decoding of per-utterance logits");
    s->add_option("--logits-dir", dec.logits_dir, "Directory of <id>.ctcl or <id>.txt files")
        ->required();
    s->add_option("--vocab", dec.vocab, "Label file, one label per line, blank first")
        ->required();
    s->add_option("--output", dec.output, "Hypothesis TSV (default stdout)");
    s->add_option("--beam", dec.beam, "Beam width, 0 for greedy decoding");
    s->add_option("--lm", dec.lm, "ARPA language model for shallow fusion");
    s->add_option("--alpha", dec.alpha, "LM weight");
    s->add_option("--beta", dec.beta, "Per-word bonus");
    AddGlobals(s, global, config_path, dump, flags);
    subs["decode"] = {s, [&](Console& c) { return RunDecode(dec, global, c); }};
  }

  ScoreOptions score;
  {
    auto* s = app.add_subcommand("score", "Corpus word error rate of hypotheses");
    s->add_option("--refs", score.refs, "Reference manifest (JSON lines)")->required();
    s->add_option("--hyps", score.hyps, "Hypothesis TSV")->required();
    s->add_option("--model", score.model, "Row label in the report");
    AddFlag(s, "--per-utt", score.per_utt, "Add a per-utterance breakdown", flags);
    AddFlag(s, "--normalize,!--no-normalize", score.normalize,
            "Normalize both sides before scoring", flags);
    s->add_option("--csv", score.csv, "Write the CSV report here instead of stdout");
    AddGlobals(s, global, config_path, dump, flags);
    subs["score"] = {s, [&](Console& c) { return RunScore(score, global, c); }};
  }

  LmTrainOptions lmt;
  {
    auto* s = app.add_subcommand("lm-train", "Train an absolute-discounting n-gram LM");
    s->add_option("--corpus", lmt.corpus, "Text corpus, one sentence per line")->required();
    s->add_option("--output", lmt.output, "Output ARPA file")->required();
    s->add_option("--order", lmt.order, "N-gram order")->check(CLI::PositiveNumber);
    s->add_option("--discount", lmt.discount, "Absolute discount in (0, 1)");
    AddFlag(s, "--normalize,!--no-normalize", lmt.normalize, "Normalize corpus lines", flags);
    AddGlobals(s, global, config_path, dump, flags);
    subs["lm-train"] = {s, [&](Console& c) { return RunLmTrain(lmt, global, c); }};
  }

  // Config file values go first so that explicit flags override them.
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    if (!args.empty() && subs.count(args[0])) {
      for (std::size_t i = 1; i < args.size(); ++i) {
        std::string path;
        if (args[i] == kConfigFlag && i + 1 < args.size())
          path = args[i + 1];
        else if (args[i].rfind(std::string(kConfigFlag) + "=", 0) == 0)
          path = args[i].substr(std::string(kConfigFlag).size() + 1);
        if (path.empty()) continue;
        const auto extra = ConfigArgs(path);
        args.insert(args.begin() + 1, extra.begin(), extra.end());
        break;
      }
    }
  } catch (const vhfasr::Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  }

  // Dumping a partial configuration is allowed.
  if (std::find(args.begin(), args.end(), kDumpFlag) != args.end())
    for (auto& [name, sub] : subs)
      for (CLI::Option* opt : sub.app->get_options()) opt->required(false);

  std::reverse(args.begin(), args.end());
  try {
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInvalidInput;
  }

  for (auto& [name, sub] : subs) {
    if (!sub.app->parsed()) continue;
    if (dump) {
      out << DumpConfig(*sub.app, flags);
      return kExitOk;
    }
    Console console(out, err, global.quiet);
    try {
      return sub.run(console);
    } catch (const vhfasr::Error& e) {
      console.Error(e.what());
      return kExitInvalidInput;
    }
  }
  return kExitInvalidInput;
}

}  // namespace vhfasr::cli
