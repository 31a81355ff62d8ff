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

#include "coc/noise.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <span>
#include <string_view>

#include "coc/errors.h"
#include "coc/random.h"
#include "coc/textproc.h"

namespace coc {

namespace {

constexpr std::string_view kFiller = "呃";

constexpr std::array<std::string_view, 48> kMandarinPool = {
    "的", "是", "在", "不", "了", "有", "和", "人", "这", "中", "大", "为",
    "上", "个", "国", "我", "以", "要", "他", "她", "时", "来", "用", "们",
    "生", "到", "作", "地", "于", "出", "就", "分", "对", "成", "会", "可",
    "主", "发", "年", "动", "同", "工", "也", "能", "下", "过", "子", "说"};
constexpr std::array<std::string_view, 16> kEnglishPool = {
    "the",   "and",  "model", "data", "system", "AI",  "Apple", "Google",
    "token", "cloud", "app",  "online", "OK",   "iPhone", "Python", "GPU"};
constexpr std::array<std::string_view, 10> kNumberPool = {
    "1", "2", "3", "10", "12", "20", "100", "2024", "3.5", "45"};
constexpr std::array<std::string_view, 11> kPunctuationPool = {
    "，", "。", "、", "？", "！", "：", "；", "“", "”", "《", "》"};

std::span<const std::string_view> PoolFor(Category c) {
  switch (c) {
    case Category::kMandarin:
      return kMandarinPool;
    case Category::kCSEnglish:
      return kEnglishPool;
    case Category::kITN:
      return kNumberPool;
    case Category::kPunctuation:
      return kPunctuationPool;
  }
  return kMandarinPool;
}

// Pool entry different from `avoid` (pools have at least two entries).
std::string_view PickOther(Category c, std::string_view avoid, uint64_t pick) {
  const auto pool = PoolFor(c);
  size_t k = pick % pool.size();
  if (pool[k] == avoid) k = (k + 1) % pool.size();
  return pool[k];
}

// Characters that may fuse with a neighbour into one token when written
// without a space in between.
bool Joinable(char32_t c) {
  return IsLatinLetter(c) || IsDigit(c) || c == '.' || c == ',' || c == '%' ||
         c == ':' || c == '\'' || c == 0x2019;
}

class Emitter {
 public:
  void Whitespace(std::string_view ws) {
    if (ws.empty()) return;
    out_.append(ws);
    has_last_ = false;
  }

  // `source` is the index of the clean token this piece reproduces
  // unchanged (up to case), or -1 for new or rewritten text.
  void Piece(std::string_view text, long source) {
    if (text.empty()) return;
    const auto cps = DecodeUtf8(text);
    const bool adjacent_in_source =
        source >= 0 && last_source_ >= 0 && source == last_source_ + 1;
    if (has_last_ && !adjacent_in_source && Joinable(last_) &&
        Joinable(cps.front().value)) {
      out_.push_back(' ');
    }
    out_.append(text);
    last_ = cps.back().value;
    has_last_ = true;
    last_source_ = source;
  }

  std::string Take() { return std::move(out_); }

 private:
  std::string out_;
  char32_t last_ = 0;
  bool has_last_ = false;
  long last_source_ = -2;
};

bool InUnitRange(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

void NoiseProfile::Validate() const {
  const std::pair<const char*, double> rates[] = {
      {"sub_rate", sub_rate},
      {"del_rate", del_rate},
      {"ins_rate", ins_rate},
      {"punct_drop_rate", punct_drop_rate},
      {"number_verbalize_rate", number_verbalize_rate},
      {"filler_rate", filler_rate}};
  for (const auto& [name, value] : rates) {
    if (!InUnitRange(value)) {
      throw ConfigError(std::string(name) + " must be in [0, 1], got " +
                        std::to_string(value));
    }
  }
}

nlohmann::json NoiseProfile::ToJson() const {
  return {{"sub_rate", sub_rate},
          {"del_rate", del_rate},
          {"ins_rate", ins_rate},
          {"punct_drop_rate", punct_drop_rate},
          {"number_verbalize_rate", number_verbalize_rate},
          {"lowercase_english", lowercase_english},
          {"filler_rate", filler_rate},
          {"seed", seed}};
}

NoiseProfile NoiseProfile::FromJson(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("noise profile must be a JSON object");
  NoiseProfile p;
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "sub_rate") {
        p.sub_rate = value.get<double>();
      } else if (key == "del_rate") {
        p.del_rate = value.get<double>();
      } else if (key == "ins_rate") {
        p.ins_rate = value.get<double>();
      } else if (key == "punct_drop_rate") {
        p.punct_drop_rate = value.get<double>();
      } else if (key == "number_verbalize_rate") {
        p.number_verbalize_rate = value.get<double>();
      } else if (key == "lowercase_english") {
        p.lowercase_english = value.get<bool>();
      } else if (key == "filler_rate") {
        p.filler_rate = value.get<double>();
      } else if (key == "seed") {
        p.seed = value.get<uint64_t>();
      } else {
        throw ConfigError("unknown noise profile key \"" + key + "\"");
      }
    } catch (const nlohmann::json::exception&) {
      throw ConfigError("noise profile key \"" + key + "\" has the wrong type");
    }
  }
  p.Validate();
  return p;
}

std::string VerbalizeDigits(std::string_view number) {
  static constexpr std::string_view kDigits[] = {
      "零", "一", "二", "三", "四", "五", "六", "七", "八", "九"};
  std::string out;
  for (const CodePoint& cp : DecodeUtf8(number)) {
    const char32_t c = cp.value;
    if (c >= '0' && c <= '9') {
      out += kDigits[c - '0'];
    } else if (c >= 0xFF10 && c <= 0xFF19) {
      out += kDigits[c - 0xFF10];
    } else if (c == '.') {
      out += "点";
    } else if (c == ':') {
      out += "比";
    } else if (c == '%') {
      out += "百分";
    }
    // ',' is a digit-group separator and is not read out.
  }
  return out;
}

NoiseResult InjectNoiseWithStats(std::string_view clean,
                                 const NoiseProfile& profile) {
  profile.Validate();
  const std::vector<Token> tokens = Tokenize(clean);
  SeededRng rng(profile.seed);
  Emitter emit;
  NoiseResult result;
  size_t prev_end = 0;

  for (size_t t = 0; t < tokens.size(); ++t) {
    const Token& tok = tokens[t];
    const double u_filler = rng.Uniform();
    const double u_drop = rng.Uniform();
    const double u_del = rng.Uniform();
    const double u_sub = rng.Uniform();
    const double u_verbalize = rng.Uniform();
    const double u_ins = rng.Uniform();
    const uint64_t pick_sub = rng.Next();
    const uint64_t pick_ins = rng.Next();

    emit.Whitespace(clean.substr(prev_end, tok.byte_offset - prev_end));
    prev_end = tok.byte_end();

    if (u_filler < profile.filler_rate) {
      emit.Piece(kFiller, -1);
      ++result.edits;
    }

    const long source = static_cast<long>(t);
    if (tok.category == Category::kPunctuation &&
        u_drop < profile.punct_drop_rate) {
      ++result.edits;
      ++result.punctuation_dropped;
    } else if (u_del < profile.del_rate) {
      ++result.edits;
    } else if (u_sub < profile.sub_rate) {
      emit.Piece(PickOther(tok.category, tok.surface, pick_sub), -1);
      ++result.edits;
    } else if (tok.category == Category::kITN &&
               u_verbalize < profile.number_verbalize_rate) {
      const std::string spoken = VerbalizeDigits(tok.surface);
      emit.Piece(spoken, -1);
      result.edits += std::max<size_t>(1, CountCodePoints(spoken));
    } else if (tok.category == Category::kCSEnglish &&
               profile.lowercase_english) {
      std::string lowered = tok.surface;
      for (char& c : lowered) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      }
      if (lowered != tok.surface) ++result.edits;
      emit.Piece(lowered, source);
    } else {
      emit.Piece(tok.surface, source);
    }

    if (u_ins < profile.ins_rate) {
      emit.Piece(PickOther(tok.category, "", pick_ins), -1);
      ++result.edits;
    }
  }
  emit.Whitespace(clean.substr(prev_end));
  result.text = emit.Take();
  return result;
}

std::string InjectNoise(std::string_view clean, const NoiseProfile& profile) {
  return InjectNoiseWithStats(clean, profile).text;
}

}  // namespace coc
