// Copyright (c) 2026 The coc-asr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef COC_TEXTPROC_H_
#define COC_TEXTPROC_H_

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace coc {

// Token classes used to decompose error rates. Each category has its own
// granularity: one ideograph, one Latin word, one digit run, one symbol.
enum class Category { kMandarin = 0, kPunctuation = 1, kITN = 2, kCSEnglish = 3 };

inline constexpr Category kAllCategories[] = {
    Category::kMandarin, Category::kPunctuation, Category::kITN,
    Category::kCSEnglish};

// Stable snake_case key ("mandarin", "punctuation", "itn", "cs_english").
const char* CategoryKey(Category c);
// Display name ("Mandarin", "Punctuation", "ITN", "CS-English").
const char* CategoryLabel(Category c);

struct Token {
  std::string surface;
  Category category;
  size_t char_offset = 0;  // in code points
  size_t byte_offset = 0;  // in UTF-8 bytes

  size_t byte_end() const { return byte_offset + surface.size(); }
  bool operator==(const Token&) const = default;
};

struct Sentence {
  std::string text;
  std::optional<char32_t> terminal;
};

struct CodePoint {
  char32_t value;
  size_t byte_offset;
  size_t byte_length;
};

// Invalid byte sequences decode to one U+FFFD per offending byte, so byte
// offsets always tile the input.
std::vector<CodePoint> DecodeUtf8(std::string_view text);
void AppendUtf8(char32_t cp, std::string* out);
size_t CountCodePoints(std::string_view text);

bool IsCjkIdeograph(char32_t c);
bool IsLatinLetter(char32_t c);
bool IsDigit(char32_t c);
bool IsWhitespace(char32_t c);
bool IsSentenceTerminal(char32_t c);

// Splits text into classified tokens. Whitespace is dropped.
//   ideograph            -> one Mandarin token per character
//   Latin letters        -> one CSEnglish token per run; an apostrophe
//                           between two letters stays inside the word
//   digits               -> one ITN token per run; '.', ',', '%', ':'
//                           between two digits stay inside the number
//   anything else        -> one Punctuation token per character
std::vector<Token> Tokenize(std::string_view text);

// Cuts after every run of terminal punctuation (。？！.?!). A '.' with a
// digit on both sides is a decimal point, not a terminator.
// Concatenating the returned texts always yields `text`.
std::vector<Sentence> SplitSentences(std::string_view text);

// Character -> tone-numbered pinyin syllable ("ni3"), one reading per
// character. Immutable after loading.
class PinyinTable {
 public:
  PinyinTable() = default;

  // Format: UTF-8, "<char>\t<syllable>" per line, '#' starts a comment.
  // When a character is listed twice the first reading wins.
  static PinyinTable Load(const std::string& path);
  static PinyinTable Parse(std::istream& in, const std::string& source_name);

  void Insert(char32_t c, std::string syllable);
  const std::string* Lookup(char32_t c) const;
  size_t size() const { return entries_.size(); }

 private:
  std::unordered_map<char32_t, std::string> entries_;
};

// Replaces each ideograph found in the table by its syllable. Everything
// else (Latin, digits, punctuation, unknown characters) is kept verbatim
// as a span; syllables and spans are joined by single spaces.
std::string ToPinyin(std::string_view text, const PinyinTable& table);

}  // namespace coc

#endif  // COC_TEXTPROC_H_
