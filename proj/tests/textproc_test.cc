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
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"

#include "coc/errors.h"
#include "coc/random.h"
#include "test_util.h"

namespace coc {
namespace {

using Pieces = std::vector<std::pair<std::string, Category>>;

Pieces Surfaces(const std::vector<Token>& tokens) {
  Pieces out;
  for (const Token& t : tokens) out.emplace_back(t.surface, t.category);
  return out;
}

// Independent classifier: one category per code point by Unicode range,
// then adjacent letters / digits merged into runs.
Category ClassifyChar(char32_t c) {
  if ((c >= 0x4E00 && c <= 0x9FFF) || (c >= 0x3400 && c <= 0x4DBF)) {
    return Category::kMandarin;
  }
  if ((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z')) return Category::kCSEnglish;
  if (c >= '0' && c <= '9') return Category::kITN;
  return Category::kPunctuation;
}

TEST(TokenizeTest, Empty) { EXPECT_TRUE(Tokenize("").empty()); }

TEST(TokenizeTest, MandarinCharacters) {
  EXPECT_EQ(Surfaces(Tokenize("你好")),
            (Pieces{{"你", Category::kMandarin}, {"好", Category::kMandarin}}));
}

TEST(TokenizeTest, MixedScript) {
  EXPECT_EQ(Surfaces(Tokenize("GPT模型, 2024")),
            (Pieces{{"GPT", Category::kCSEnglish},
                    {"模", Category::kMandarin},
                    {"型", Category::kMandarin},
                    {",", Category::kPunctuation},
                    {"2024", Category::kITN}}));
}

TEST(TokenizeTest, InternalSeparators) {
  EXPECT_EQ(Surfaces(Tokenize("don't 3.5%5 12:30 1,000.")),
            (Pieces{{"don't", Category::kCSEnglish},
                    {"3.5%5", Category::kITN},
                    {"12:30", Category::kITN},
                    {"1,000", Category::kITN},
                    {".", Category::kPunctuation}}));
  // A trailing apostrophe is not internal.
  EXPECT_EQ(Surfaces(Tokenize("dogs'")),
            (Pieces{{"dogs", Category::kCSEnglish}, {"'", Category::kPunctuation}}));
  EXPECT_EQ(Surfaces(Tokenize("50%")),
            (Pieces{{"50", Category::kITN}, {"%", Category::kPunctuation}}));
}

TEST(TokenizeTest, FullwidthPunctuation) {
  EXPECT_EQ(Surfaces(Tokenize("好，吗？")),
            (Pieces{{"好", Category::kMandarin},
                    {"，", Category::kPunctuation},
                    {"吗", Category::kMandarin},
                    {"？", Category::kPunctuation}}));
}

TEST(TokenizeTest, OffsetsPointBackIntoText) {
  const std::string text = " 今天 is\tMonday，3点。";
  size_t last_char = 0;
  bool first = true;
  for (const Token& t : Tokenize(text)) {
    EXPECT_EQ(text.substr(t.byte_offset, t.surface.size()), t.surface);
    if (!first) {
      EXPECT_GT(t.char_offset, last_char);
    }
    last_char = t.char_offset;
    first = false;
  }
}

// Every non-whitespace character lands in exactly one token, in order, and
// single-character categories agree with the range classifier.
TEST(TokenizeTest, RandomTextAgreesWithCharClassifier) {
  const std::vector<std::string> alphabet = {
      "中", "文", "a", "B", "z", "7", "0", ".", ",", "%", ":", "'",
      "。", "，", " ", "!", "？", "-", "(", "我"};
  SeededRng rng(17);
  for (int iter = 0; iter < 2000; ++iter) {
    std::string text;
    const size_t n = rng.Below(16);
    for (size_t i = 0; i < n; ++i) text += alphabet[rng.Below(alphabet.size())];

    std::string joined, expected;
    for (const Token& t : Tokenize(text)) {
      joined += t.surface;
      EXPECT_FALSE(t.surface.empty());
      EXPECT_EQ(t.surface.find(' '), std::string::npos);
      const auto cps = DecodeUtf8(t.surface);
      if (cps.size() == 1) {
        EXPECT_EQ(t.category, ClassifyChar(cps[0].value)) << text;
      } else {
        EXPECT_TRUE(t.category == Category::kCSEnglish || t.category == Category::kITN) << text;
        EXPECT_EQ(ClassifyChar(cps.front().value), t.category) << text;
        EXPECT_EQ(ClassifyChar(cps.back().value), t.category) << text;
      }
    }
    for (char c : text) {
      if (c != ' ') expected += c;
    }
    EXPECT_EQ(joined, expected) << text;
  }
}

TEST(Utf8Test, InvalidBytesBecomeReplacementCharacters) {
  const std::string text = "a\xff\xfe" "b";
  const auto cps = DecodeUtf8(text);
  ASSERT_EQ(cps.size(), 4u);
  EXPECT_EQ(cps[1].value, U'�');
  EXPECT_EQ(cps[2].value, U'�');
  EXPECT_EQ(CountCodePoints("你好a"), 3u);
}

std::vector<std::pair<std::string, std::string>> SentencePieces(
    std::string_view text) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const Sentence& s : SplitSentences(text)) {
    std::string t;
    if (s.terminal) AppendUtf8(*s.terminal, &t);
    out.emplace_back(s.text, t);
  }
  return out;
}

TEST(SplitSentencesTest, Examples) {
  using P = std::vector<std::pair<std::string, std::string>>;
  EXPECT_TRUE(SplitSentences("").empty());
  EXPECT_EQ(SentencePieces("今天下雨。你好吗？"),
            (P{{"今天下雨。", "。"}, {"你好吗？", "？"}}));
  EXPECT_EQ(SentencePieces("abc"), (P{{"abc", ""}}));
  EXPECT_EQ(SentencePieces("A.B。C"),
            (P{{"A.", "."}, {"B。", "。"}, {"C", ""}}));
}

TEST(SplitSentencesTest, TerminalRunsAndDecimals) {
  using P = std::vector<std::pair<std::string, std::string>>;
  EXPECT_EQ(SentencePieces("真的吗？！好。"),
            (P{{"真的吗？！", "！"}, {"好。", "。"}}));
  EXPECT_EQ(SentencePieces("涨了3.5个点。"), (P{{"涨了3.5个点。", "。"}}));
}

TEST(SplitSentencesTest, ConcatenationReproducesText) {
  SeededRng rng(5);
  for (int iter = 0; iter < 300; ++iter) {
    const std::string text = testing::CleanText(rng, 1 + rng.Below(8)) +
                             (rng.Below(2) ? "  " : "");
    std::string joined;
    for (const Sentence& s : SplitSentences(text)) {
      joined += s.text;
      if (s.terminal) {
        std::string t;
        AppendUtf8(*s.terminal, &t);
        EXPECT_TRUE(s.text.ends_with(t)) << s.text;
      }
    }
    EXPECT_EQ(joined, text);
  }
}

// Oracle for pinyin: a direct scan of the shipped table file.
std::map<std::string, std::string> ReadTableFile() {
  std::ifstream in(COC_TEST_PINYIN_TABLE);
  std::map<std::string, std::string> table;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const size_t tab = line.find('\t');
    table.emplace(line.substr(0, tab), line.substr(tab + 1));
  }
  return table;
}

class PinyinTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    table_ = new PinyinTable(PinyinTable::Load(COC_TEST_PINYIN_TABLE));
    file_ = new std::map<std::string, std::string>(ReadTableFile());
  }
  static void TearDownTestSuite() {
    delete table_;
    delete file_;
  }
  static PinyinTable* table_;
  static std::map<std::string, std::string>* file_;
};

PinyinTable* PinyinTest::table_ = nullptr;
std::map<std::string, std::string>* PinyinTest::file_ = nullptr;

TEST_F(PinyinTest, TableMatchesFile) {
  EXPECT_EQ(table_->size(), file_->size());
  EXPECT_GT(table_->size(), 20000u);
}

TEST_F(PinyinTest, Examples) {
  EXPECT_EQ(ToPinyin("", *table_), "");
  EXPECT_EQ(ToPinyin("你好", *table_),
            file_->at("你") + " " + file_->at("好"));
  EXPECT_EQ(ToPinyin("你好", *table_), "ni3 hao3");
  EXPECT_EQ(ToPinyin("GPT模型", *table_),
            "GPT " + file_->at("模") + " " + file_->at("型"));
  EXPECT_EQ(ToPinyin("GPT模型", *table_), "GPT mo2 xing2");
  EXPECT_EQ(ToPinyin("你好。", *table_), "ni3 hao3 。");
}

TEST(PinyinTableTest, ParseRejectsMalformedLines) {
  std::istringstream ok("# comment\n你\tni3\n你\tni2\n");
  const PinyinTable t = PinyinTable::Parse(ok, "ok");
  ASSERT_NE(t.Lookup(U'你'), nullptr);
  EXPECT_EQ(*t.Lookup(U'你'), "ni3");
  std::istringstream bad("你\tni3\nbroken line\n");
  try {
    PinyinTable::Parse(bad, "bad.tsv");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_THAT(e.what(), ::testing::HasSubstr("bad.tsv:2"));
  }
}

}  // namespace
}  // namespace coc
