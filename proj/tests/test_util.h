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

// Helpers shared by the unit tests and the acceptance suite.

#ifndef COC_TESTS_TEST_UTIL_H_
#define COC_TESTS_TEST_UTIL_H_

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <unistd.h>
#include <vector>

#include "coc/corpus.h"
#include "coc/llm_client.h"
#include "coc/noise.h"
#include "coc/random.h"
#include "coc/textproc.h"

namespace coc {
namespace testing {

inline const std::vector<std::string>& SentenceBank() {
  static const std::vector<std::string> bank = {
      "今天天气很好",
      "我们下午去公园散步吧",
      "Apple 发布了新的 iPhone",
      "这款手机的价格是 5999 元",
      "会议定在 3:30 开始",
      "增长率达到了 12.5%",
      "请把 report 发给我",
      "他说这个 idea 不错",
      "我们明天再讨论",
      "人工智能正在改变世界",
      "语音识别的错误需要纠正",
      "这篇文章一共有 2024 个字",
      "你觉得怎么样",
      "好的",
      "OpenAI 和 Google 都有类似的模型",
      "数据集包含 1,200 条样本",
      "老师让我们读完第三章",
      "北京的冬天很冷",
  };
  return bank;
}

// A clean document of `sentences` sentences drawn from the bank, with
// mixed terminals and an optional unterminated tail.
inline std::string CleanText(SeededRng& rng, size_t sentences) {
  static const char* const kTerminals[] = {"。", "？", "！", "。"};
  static const char* const kInner[] = {"，", "、", ""};
  const auto& bank = SentenceBank();
  std::string text;
  for (size_t i = 0; i < sentences; ++i) {
    text += bank[rng.Below(bank.size())];
    if (rng.Below(3) == 0) {
      text += kInner[rng.Below(3)];
      text += bank[rng.Below(bank.size())];
    }
    const bool last = i + 1 == sentences;
    if (last && rng.Below(4) == 0) break;
    text += kTerminals[rng.Below(4)];
  }
  return text;
}

inline NoiseProfile DefaultNoise(uint64_t seed) {
  NoiseProfile p;
  p.sub_rate = 0.08;
  p.del_rate = 0.03;
  p.ins_rate = 0.03;
  p.punct_drop_rate = 0.2;
  p.number_verbalize_rate = 0.3;
  p.lowercase_english = true;
  p.filler_rate = 0.02;
  p.seed = seed;
  return p;
}

// `n` documents with references and noisy hypotheses. Hypotheses are
// never empty.
inline std::vector<Document> SyntheticCorpus(size_t n, uint64_t seed,
                                             size_t min_sentences = 1,
                                             size_t max_sentences = 20) {
  SeededRng rng(seed);
  std::vector<Document> docs;
  docs.reserve(n);
  for (size_t k = 0; k < n; ++k) {
    Document doc;
    doc.id = "doc" + std::to_string(k);
    const size_t count =
        min_sentences + rng.Below(max_sentences - min_sentences + 1);
    doc.ref_text = CleanText(rng, count);
    doc.hyp_text = InjectNoise(*doc.ref_text, DefaultNoise(rng.Next()));
    if (Tokenize(doc.hyp_text).empty()) doc.hyp_text = *doc.ref_text;
    docs.push_back(std::move(doc));
  }
  return docs;
}

// Deterministic stand-in for a model: rewrites a hash-chosen share of the
// Mandarin characters of each hypothesis segment, so gate error rates
// spread over [0, 1].
class PerturbingClient final : public LlmClient {
 public:
  std::string Complete(const CompletionRequest& request) override {
    ++calls_;
    const std::string& hyp = request.segment->hyp_segment;
    const uint64_t h = DeriveSeed(request.segment_index * 131 + request.attempt,
                                  request.doc_id);
    const uint64_t per_mille = h % 800;
    SeededRng rng(h);
    std::string out;
    for (const CodePoint& cp : DecodeUtf8(hyp)) {
      if (IsCjkIdeograph(cp.value) && rng.Below(1000) < per_mille) {
        out += "错";
      } else {
        out.append(hyp, cp.byte_offset, cp.byte_length);
      }
    }
    return out;
  }
  size_t calls() const { return calls_; }

 private:
  std::atomic<size_t> calls_{0};
};

class TempDir {
 public:
  TempDir() {
    std::string templ =
        (std::filesystem::temp_directory_path() / "coc_test_XXXXXX").string();
    if (mkdtemp(templ.data()) == nullptr) throw std::runtime_error("mkdtemp");
    path_ = templ;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string File(const std::string& name) const {
    return (path_ / name).string();
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::string Slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void WriteText(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
}

}  // namespace testing
}  // namespace coc

#endif  // COC_TESTS_TEST_UTIL_H_
