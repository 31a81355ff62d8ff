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

#include "coc/textproc.h"

#include <fstream>
#include <utility>

#include "coc/errors.h"

namespace coc {

const char* CategoryKey(Category c) {
  switch (c) {
    case Category::kMandarin:
      return "mandarin";
    case Category::kPunctuation:
      return "punctuation";
    case Category::kITN:
      return "itn";
    case Category::kCSEnglish:
      return "cs_english";
  }
  return "?";
}

const char* CategoryLabel(Category c) {
  switch (c) {
    case Category::kMandarin:
      return "Mandarin";
    case Category::kPunctuation:
      return "Punctuation";
    case Category::kITN:
      return "ITN";
    case Category::kCSEnglish:
      return "CS-English";
  }
  return "?";
}

std::vector<CodePoint> DecodeUtf8(std::string_view text) {
  std::vector<CodePoint> out;
  out.reserve(text.size());
  const auto* s = reinterpret_cast<const unsigned char*>(text.data());
  const size_t n = text.size();
  size_t i = 0;
  while (i < n) {
    const unsigned char b = s[i];
    size_t len = 0;
    char32_t cp = 0;
    if (b < 0x80) {
      len = 1;
      cp = b;
    } else if ((b & 0xE0) == 0xC0) {
      len = 2;
      cp = b & 0x1F;
    } else if ((b & 0xF0) == 0xE0) {
      len = 3;
      cp = b & 0x0F;
    } else if ((b & 0xF8) == 0xF0) {
      len = 4;
      cp = b & 0x07;
    }
    bool ok = len > 0 && i + len <= n;
    for (size_t k = 1; ok && k < len; ++k) {
      if ((s[i + k] & 0xC0) != 0x80) {
        ok = false;
      } else {
        cp = (cp << 6) | (s[i + k] & 0x3F);
      }
    }
    // Reject overlong forms, surrogates and out-of-range values.
    if (ok && ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
               (len == 4 && (cp < 0x10000 || cp > 0x10FFFF)) ||
               (cp >= 0xD800 && cp <= 0xDFFF))) {
      ok = false;
    }
    if (!ok) {
      out.push_back({0xFFFD, i, 1});
      ++i;
      continue;
    }
    out.push_back({cp, i, len});
    i += len;
  }
  return out;
}

void AppendUtf8(char32_t cp, std::string* out) {
  if (cp < 0x80) {
    out->push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out->push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out->push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out->push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out->push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out->push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out->push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

size_t CountCodePoints(std::string_view text) {
  return DecodeUtf8(text).size();
}

bool IsCjkIdeograph(char32_t c) {
  return (c >= 0x4E00 && c <= 0x9FFF) ||    // URO
         (c >= 0x3400 && c <= 0x4DBF) ||    // Extension A
         (c >= 0xF900 && c <= 0xFAFF) ||    // compatibility ideographs
         (c >= 0x20000 && c <= 0x3134F);    // Extensions B-G, supplement
}

bool IsLatinLetter(char32_t c) {
  if ((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z')) return true;
  if (c >= 0xC0 && c <= 0x24F) return c != 0xD7 && c != 0xF7;
  return (c >= 0xFF21 && c <= 0xFF3A) || (c >= 0xFF41 && c <= 0xFF5A);
}

bool IsDigit(char32_t c) {
  return (c >= '0' && c <= '9') || (c >= 0xFF10 && c <= 0xFF19);
}

bool IsWhitespace(char32_t c) {
  switch (c) {
    case ' ':
    case '\t':
    case '\n':
    case '\r':
    case '\v':
    case '\f':
    case 0x85:
    case 0xA0:
    case 0x1680:
    case 0x200B:  // zero width space
    case 0x2028:
    case 0x2029:
    case 0x202F:
    case 0x205F:
    case 0x3000:
    case 0xFEFF:
      return true;
    default:
      return c >= 0x2000 && c <= 0x200A;
  }
}

bool IsSentenceTerminal(char32_t c) {
  return c == 0x3002 || c == 0xFF1F || c == 0xFF01 || c == '.' || c == '?' ||
         c == '!';
}

namespace {

bool IsApostrophe(char32_t c) { return c == '\'' || c == 0x2019; }

bool IsNumberInfix(char32_t c) {
  return c == '.' || c == ',' || c == '%' || c == ':';
}

Token MakeToken(std::string_view text, const std::vector<CodePoint>& cps,
                size_t begin, size_t end, Category category) {
  const size_t b0 = cps[begin].byte_offset;
  const size_t b1 = cps[end - 1].byte_offset + cps[end - 1].byte_length;
  return Token{std::string(text.substr(b0, b1 - b0)), category, begin, b0};
}

}  // namespace

std::vector<Token> Tokenize(std::string_view text) {
  const std::vector<CodePoint> cps = DecodeUtf8(text);
  const size_t n = cps.size();
  std::vector<Token> tokens;
  size_t i = 0;
  while (i < n) {
    const char32_t c = cps[i].value;
    if (IsWhitespace(c)) {
      ++i;
      continue;
    }
    size_t j = i + 1;
    Category category;
    if (IsCjkIdeograph(c)) {
      category = Category::kMandarin;
    } else if (IsLatinLetter(c)) {
      category = Category::kCSEnglish;
      while (j < n) {
        if (IsLatinLetter(cps[j].value)) {
          ++j;
        } else if (IsApostrophe(cps[j].value) && j + 1 < n &&
                   IsLatinLetter(cps[j + 1].value)) {
          j += 2;
        } else {
          break;
        }
      }
    } else if (IsDigit(c)) {
      category = Category::kITN;
      while (j < n) {
        if (IsDigit(cps[j].value)) {
          ++j;
        } else if (IsNumberInfix(cps[j].value) && j + 1 < n &&
                   IsDigit(cps[j + 1].value)) {
          j += 2;
        } else {
          break;
        }
      }
    } else {
      category = Category::kPunctuation;
    }
    tokens.push_back(MakeToken(text, cps, i, j, category));
    i = j;
  }
  return tokens;
}

std::vector<Sentence> SplitSentences(std::string_view text) {
  const std::vector<CodePoint> cps = DecodeUtf8(text);
  const size_t n = cps.size();
  auto is_cut_char = [&](size_t k) {
    if (!IsSentenceTerminal(cps[k].value)) return false;
    if (cps[k].value == '.' && k > 0 && k + 1 < n &&
        IsDigit(cps[k - 1].value) && IsDigit(cps[k + 1].value)) {
      return false;
    }
    return true;
  };

  std::vector<Sentence> sentences;
  size_t start_byte = 0;
  size_t k = 0;
  while (k < n) {
    if (!is_cut_char(k)) {
      ++k;
      continue;
    }
    while (k + 1 < n && is_cut_char(k + 1)) ++k;
    const size_t end_byte = cps[k].byte_offset + cps[k].byte_length;
    sentences.push_back(
        {std::string(text.substr(start_byte, end_byte - start_byte)),
         cps[k].value});
    start_byte = end_byte;
    ++k;
  }
  if (start_byte < text.size()) {
    sentences.push_back({std::string(text.substr(start_byte)), std::nullopt});
  }
  return sentences;
}

PinyinTable PinyinTable::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open pinyin table: " + path);
  return Parse(in, path);
}

PinyinTable PinyinTable::Parse(std::istream& in,
                               const std::string& source_name) {
  PinyinTable table;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const size_t tab = line.find('\t');
    auto fail = [&](const std::string& why) {
      throw ParseError(source_name + ":" + std::to_string(line_no) + ": " +
                       why);
    };
    if (tab == std::string::npos) fail("expected <char><TAB><syllable>");
    const auto key = DecodeUtf8(std::string_view(line).substr(0, tab));
    if (key.size() != 1) fail("key must be exactly one character");
    std::string syllable = line.substr(tab + 1);
    while (!syllable.empty() &&
           (syllable.back() == ' ' || syllable.back() == '\t')) {
      syllable.pop_back();
    }
    if (syllable.empty()) fail("empty syllable");
    table.entries_.emplace(key[0].value, std::move(syllable));
  }
  return table;
}

void PinyinTable::Insert(char32_t c, std::string syllable) {
  entries_.insert_or_assign(c, std::move(syllable));
}

const std::string* PinyinTable::Lookup(char32_t c) const {
  auto it = entries_.find(c);
  return it == entries_.end() ? nullptr : &it->second;
}

std::string ToPinyin(std::string_view text, const PinyinTable& table) {
  std::string out;
  std::string span;
  auto append_piece = [&out](std::string_view piece) {
    if (piece.empty()) return;
    if (!out.empty()) out.push_back(' ');
    out.append(piece);
  };
  auto flush_span = [&]() {
    // Whitespace at the edges of a verbatim span is replaced by the single
    // separating space.
    const auto cps = DecodeUtf8(span);
    size_t b = 0, e = cps.size();
    while (b < e && IsWhitespace(cps[b].value)) ++b;
    while (e > b && IsWhitespace(cps[e - 1].value)) --e;
    if (b < e) {
      const size_t b0 = cps[b].byte_offset;
      const size_t b1 = cps[e - 1].byte_offset + cps[e - 1].byte_length;
      append_piece(std::string_view(span).substr(b0, b1 - b0));
    }
    span.clear();
  };

  for (const CodePoint& cp : DecodeUtf8(text)) {
    const std::string* syllable =
        IsCjkIdeograph(cp.value) ? table.Lookup(cp.value) : nullptr;
    if (syllable != nullptr) {
      flush_span();
      append_piece(*syllable);
    } else {
      span.append(text.substr(cp.byte_offset, cp.byte_length));
    }
  }
  flush_span();
  return out;
}

}  // namespace coc
