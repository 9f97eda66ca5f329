// Copyright 2026 The vhfasr Authors.
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef VHFASR_TEXTNORM_H_
#define VHFASR_TEXTNORM_H_

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace vhfasr {

enum class Language { kEnglish, kGerman, kUnknown };

std::string LanguageTag(Language lang);  // "en", "de", "unknown"
Language ParseLanguageTag(const std::string& tag);

struct Transcript {
  std::string utterance_id;
  std::string text;
  Language language = Language::kUnknown;
};

// Character filter plus umlaut restoration for a word list.
//
// Digraph rewrites never apply to arbitrary text: "michael" or "steuerbord"
// stay untouched. Only words listed in the lexicon are rewritten, to the
// lexicon's replacement.
struct NormalizationRules {
  std::set<char32_t> allowed_chars;
  std::vector<std::pair<std::u32string, std::u32string>> digraph_rewrites;
  // surface form (lowercase) -> replacement, both UTF-8.
  std::map<std::string, std::string> lexicon;
  bool lowercase = true;
};

// a-z, ä ö ü ß, space and apostrophe; ae/oe/ue digraphs; built-in lexicon
// of German words commonly written without umlauts.
NormalizationRules DefaultRules();

// Applies the digraph table left to right, e.g. "faehre" -> "fähre".
std::string ApplyDigraphs(const std::string& word, const NormalizationRules& rules);

// Lexicon file: UTF-8, one "surface<TAB>replacement" pair per line, '#'
// starts a comment. A line holding only a surface form takes its
// replacement from the digraph table. Entries are merged into rules.lexicon.
// Throws FileNotFound, FormatError, or InvalidArgument for entries that
// would break idempotence.
void LoadRewriteLexicon(const std::filesystem::path& path, NormalizationRules& rules);
void ParseRewriteLexicon(const std::string& text, NormalizationRules& rules);

// Checks that every replacement uses allowed characters and is not itself
// rewritten again. Throws InvalidArgument.
void ValidateRules(const NormalizationRules& rules);

// Lowercase, map every disallowed character to a space, rewrite lexicon
// words, collapse whitespace and trim. Normalize(Normalize(x)) == Normalize(x).
std::string Normalize(const std::string& text,
                      const NormalizationRules& rules = DefaultRules());

inline constexpr const char* kBlankLabel = "<blank>";

// CTC label alphabet: "<blank>" first, then the distinct characters of the
// corpus in code point order (space included only if present). Throws
// InvalidArgument naming the first character that normalization would have
// removed.
std::vector<std::string> BuildCharset(const std::vector<Transcript>& corpus,
                                      const NormalizationRules& rules = DefaultRules());

}  // namespace vhfasr

#endif  // VHFASR_TEXTNORM_H_
