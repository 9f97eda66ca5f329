// Copyright 2026 The vhfasr Authors.
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "vhfasr/textnorm.h"

#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include "vhfasr/error.h"
#include "vhfasr/utf8.h"

namespace vhfasr {
namespace {

// German words from radio transcripts that were typed with ae/oe/ue.
constexpr std::pair<const char*, const char*> kBuiltinLexicon[] = {
    {"faehre", "fähre"},
    {"faehren", "fähren"},
    {"faehrschiff", "fährschiff"},
    {"fuer", "für"},
    {"ueber", "über"},
    {"muessen", "müssen"},
    {"koennen", "können"},
    {"koennten", "könnten"},
    {"moechte", "möchte"},
    {"moechten", "möchten"},
    {"hoeren", "hören"},
    {"hoere", "höre"},
    {"naechste", "nächste"},
    {"naechsten", "nächsten"},
    {"waehrend", "während"},
    {"rueckwaerts", "rückwärts"},
    {"vorwaerts", "vorwärts"},
    {"hafenbehoerde", "hafenbehörde"},
    {"schluessel", "schlüssel"},
    {"gruen", "grün"},
    {"gruess", "grüß"},
    {"schoen", "schön"},
    {"loeschen", "löschen"},
    {"laenge", "länge"},
    {"geschwindigkeitsaenderung", "geschwindigkeitsänderung"},
};

char32_t ToLower(char32_t c) {
  if (c >= U'A' && c <= U'Z') return c + 0x20;
  // Latin-1 capitals except the multiplication sign.
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 0x20;
  if (c == 0x1E9E) return 0xDF;  // capital sharp s
  return c;
}

bool IsSpace(char32_t c) {
  return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == U'\v' ||
         c == U'\f' || c == 0xA0;
}

std::vector<std::u32string> SplitWords(const std::u32string& s) {
  std::vector<std::u32string> words;
  std::u32string cur;
  for (char32_t c : s) {
    if (c == U' ') {
      if (!cur.empty()) words.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) words.push_back(std::move(cur));
  return words;
}

std::string FormatCodepoint(char32_t c) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "U+%04X", static_cast<unsigned>(c));
  return buf;
}

std::string LowercaseUtf8(const std::string& s) {
  std::u32string u = utf8::Decode(s);
  for (auto& c : u) c = ToLower(c);
  return utf8::Encode(u);
}

}  // namespace

std::string LanguageTag(Language lang) {
  switch (lang) {
    case Language::kEnglish:
      return "en";
    case Language::kGerman:
      return "de";
    case Language::kUnknown:
      break;
  }
  return "unknown";
}

Language ParseLanguageTag(const std::string& tag) {
  if (tag == "en") return Language::kEnglish;
  if (tag == "de") return Language::kGerman;
  if (tag.empty() || tag == "unknown") return Language::kUnknown;
  throw InvalidArgument("unknown language tag: " + tag);
}

NormalizationRules DefaultRules() {
  static const NormalizationRules rules = [] {
    NormalizationRules r;
    for (char32_t c = U'a'; c <= U'z'; ++c) r.allowed_chars.insert(c);
    r.allowed_chars.insert({U'ä', U'ö', U'ü', U'ß', U' ', U'\''});
    r.digraph_rewrites = {{U"ae", U"ä"}, {U"oe", U"ö"}, {U"ue", U"ü"}};
    for (const auto& [surface, replacement] : kBuiltinLexicon)
      r.lexicon.emplace(surface, replacement);
    return r;
  }();
  return rules;
}

std::string ApplyDigraphs(const std::string& word, const NormalizationRules& rules) {
  const std::u32string in = utf8::Decode(word);
  std::u32string out;
  std::size_t i = 0;
  while (i < in.size()) {
    bool replaced = false;
    for (const auto& [pattern, replacement] : rules.digraph_rewrites) {
      if (!pattern.empty() && in.compare(i, pattern.size(), pattern) == 0) {
        out += replacement;
        i += pattern.size();
        replaced = true;
        break;
      }
    }
    if (!replaced) out.push_back(in[i++]);
  }
  return utf8::Encode(out);
}

void ValidateRules(const NormalizationRules& rules) {
  for (const auto& [pattern, replacement] : rules.digraph_rewrites) {
    for (char32_t c : replacement)
      if (!rules.allowed_chars.count(c))
        throw InvalidArgument("digraph replacement uses disallowed character " +
                              FormatCodepoint(c));
  }
  for (const auto& [surface, replacement] : rules.lexicon) {
    if (surface.empty() || replacement.empty())
      throw InvalidArgument("empty lexicon entry");
    for (char32_t c : utf8::Decode(replacement))
      if (c == U' ' || !rules.allowed_chars.count(c))
        throw InvalidArgument("lexicon replacement '" + replacement +
                              "' contains " + FormatCodepoint(c));
    const auto again = rules.lexicon.find(replacement);
    if (again != rules.lexicon.end() && again->second != replacement)
      throw InvalidArgument("lexicon replacement '" + replacement +
                            "' is itself rewritten to '" + again->second + "'");
  }
}

void ParseRewriteLexicon(const std::string& text, NormalizationRules& rules) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    line.erase(0, first);
    line.erase(line.find_last_not_of(" \t") + 1);

    std::string surface, replacement;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      surface = line;
      if (surface.find(' ') != std::string::npos)
        throw FormatError("lexicon line " + std::to_string(line_no) +
                          ": expected surface<TAB>replacement");
      surface = LowercaseUtf8(surface);
      replacement = ApplyDigraphs(surface, rules);
    } else {
      surface = LowercaseUtf8(line.substr(0, tab));
      replacement = line.substr(tab + 1);
      replacement.erase(0, replacement.find_first_not_of(" \t"));
      if (surface.empty() || replacement.empty() ||
          replacement.find('\t') != std::string::npos)
        throw FormatError("lexicon line " + std::to_string(line_no) +
                          ": expected surface<TAB>replacement");
      if (rules.lowercase) replacement = LowercaseUtf8(replacement);
    }
    rules.lexicon[surface] = replacement;
  }
  ValidateRules(rules);
}

void LoadRewriteLexicon(const std::filesystem::path& path, NormalizationRules& rules) {
  std::ifstream in(path);
  if (!in) throw FileNotFound("cannot open lexicon " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  ParseRewriteLexicon(text, rules);
}

std::string Normalize(const std::string& text, const NormalizationRules& rules) {
  std::u32string chars = utf8::Decode(text);
  for (auto& c : chars) {
    if (rules.lowercase) c = ToLower(c);
    if (IsSpace(c) || !rules.allowed_chars.count(c)) c = U' ';
  }
  std::string out;
  for (const auto& word : SplitWords(chars)) {
    std::string w = utf8::Encode(word);
    if (const auto it = rules.lexicon.find(w); it != rules.lexicon.end())
      w = it->second;
    if (!out.empty()) out.push_back(' ');
    out += w;
  }
  return out;
}

std::vector<std::string> BuildCharset(const std::vector<Transcript>& corpus,
                                      const NormalizationRules& rules) {
  std::set<char32_t> seen;
  for (const auto& t : corpus) {
    for (char32_t c : utf8::Decode(t.text)) {
      if (!rules.allowed_chars.count(c))
        throw InvalidArgument("unnormalized character " + FormatCodepoint(c) +
                              " ('" + utf8::Encode(c) + "') in utterance '" +
                              t.utterance_id + "'");
      seen.insert(c);
    }
  }
  std::vector<std::string> labels{kBlankLabel};
  for (char32_t c : seen) labels.push_back(utf8::Encode(c));
  return labels;
}

}  // namespace vhfasr
