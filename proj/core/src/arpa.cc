// Copyright 2026 The vhfasr Authors.
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include "vhfasr/error.h"
#include "vhfasr/lm.h"
#include "vhfasr/metrics.h"

namespace vhfasr {
namespace {

std::string FormatLog(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10f", v);
  return buf;
}

double ParseLog(const std::string& s, int line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw FormatError("ARPA line " + std::to_string(line_no) + ": bad number '" + s + "'");
}

}  // namespace

std::string ToArpa(const NGramModel& model) {
  if (model.empty()) throw InvalidArgument("cannot save a model with an empty vocabulary");
  std::ostringstream out;
  out << "\\data\\\n";
  for (int k = 1; k <= model.order(); ++k)
    out << "ngram " << k << "=" << model.tables()[k - 1].size() << "\n";
  for (int k = 1; k <= model.order(); ++k) {
    out << "\n\\" << k << "-grams:\n";
    for (const auto& [key, entry] : model.tables()[k - 1]) {
      out << FormatLog(entry.log10_prob) << "\t";
      for (std::size_t i = 0; i < key.size(); ++i) {
        if (i) out << ' ';
        out << model.word(key[i]);
      }
      if (entry.log10_backoff) out << "\t" << FormatLog(*entry.log10_backoff);
      out << "\n";
    }
  }
  out << "\n\\end\\\n";
  return out.str();
}

static NGramModel ParseArpaImpl(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return true;
    }
    return false;
  };

  // Skip any preamble before \data\.
  bool found = false;
  while (next_line()) {
    if (line == "\\data\\") {
      found = true;
      break;
    }
  }
  if (!found) throw FormatError("ARPA: missing \\data\\ header");

  std::vector<std::size_t> expected;
  while (next_line()) {
    if (line.empty()) continue;
    if (line.rfind("ngram ", 0) != 0) break;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw FormatError("ARPA line " + std::to_string(line_no) + ": bad count line");
    const int k = std::stoi(line.substr(6, eq - 6));
    const long count = std::stol(line.substr(eq + 1));
    if (k != static_cast<int>(expected.size()) + 1 || count < 0)
      throw FormatError("ARPA line " + std::to_string(line_no) + ": counts out of order");
    expected.push_back(static_cast<std::size_t>(count));
  }
  if (expected.empty()) throw FormatError("ARPA: no ngram counts");

  std::vector<std::string> words;
  std::unordered_map<std::string, WordId> ids;
  std::vector<NGramModel::Table> tables(expected.size());

  std::size_t order = 0;
  bool ended = false;
  do {
    if (line.empty()) continue;
    if (line == "\\end\\") {
      ended = true;
      break;
    }
    if (line.front() == '\\') {
      const std::string suffix = "-grams:";
      if (line.size() <= suffix.size() + 1 ||
          line.compare(line.size() - suffix.size(), suffix.size(), suffix) != 0)
        throw FormatError("ARPA line " + std::to_string(line_no) + ": bad section header '" +
                          line + "'");
      const std::size_t k = std::stoul(line.substr(1, line.size() - 1 - suffix.size()));
      if (k != order + 1 || k > expected.size())
        throw FormatError("ARPA line " + std::to_string(line_no) + ": unexpected section " +
                          line);
      order = k;
      continue;
    }
    if (order == 0)
      throw FormatError("ARPA line " + std::to_string(line_no) + ": entry outside a section");
    const auto fields = SplitWords(line);
    if (fields.size() != order + 1 && fields.size() != order + 2)
      throw FormatError("ARPA line " + std::to_string(line_no) + ": expected " +
                        std::to_string(order) + " words");
    NGramEntry entry;
    entry.log10_prob = ParseLog(fields[0], line_no);
    if (fields.size() == order + 2) entry.log10_backoff = ParseLog(fields.back(), line_no);
    std::vector<WordId> key;
    for (std::size_t i = 1; i <= order; ++i) {
      auto it = ids.find(fields[i]);
      if (it == ids.end()) {
        if (order != 1)
          throw FormatError("ARPA line " + std::to_string(line_no) + ": word '" + fields[i] +
                            "' has no unigram");
        it = ids.emplace(fields[i], static_cast<WordId>(words.size())).first;
        words.push_back(fields[i]);
      }
      key.push_back(it->second);
    }
    if (!tables[order - 1].emplace(std::move(key), entry).second)
      throw FormatError("ARPA line " + std::to_string(line_no) + ": duplicate n-gram");
  } while (next_line());

  if (!ended) throw FormatError("ARPA: missing \\end\\");
  for (std::size_t k = 0; k < expected.size(); ++k)
    if (tables[k].size() != expected[k])
      throw FormatError("ARPA: header lists " + std::to_string(expected[k]) + " " +
                        std::to_string(k + 1) + "-grams, file has " +
                        std::to_string(tables[k].size()));
  return NGramModel(std::move(words), std::move(tables));
}

NGramModel ParseArpa(const std::string& text) {
  try {
    return ParseArpaImpl(text);
  } catch (const std::logic_error& e) {
    // std::stoi and friends on garbage input.
    throw FormatError(std::string("ARPA: malformed number: ") + e.what());
  }
}

void SaveArpa(const NGramModel& model, const std::filesystem::path& path) {
  const std::string text = ToArpa(model);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

NGramModel LoadArpa(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFound("cannot open ARPA file " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  return ParseArpa(text);
}

}  // namespace vhfasr
