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

#ifndef COC_CHAT_H_
#define COC_CHAT_H_

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "coc/corpus.h"
#include "coc/textproc.h"

namespace coc {

enum class Role { kUser, kAssistant };
enum class GuidanceMode { kHypothesis, kPinyin };

const char* RoleName(Role role);  // "user" / "assistant"
const char* GuidanceName(GuidanceMode mode);  // "hyp" / "pinyin"
// Accepts "hyp" or "pinyin"; throws ConfigError otherwise.
GuidanceMode ParseGuidance(std::string_view name);

struct Message {
  Role role;
  std::string content;

  bool operator==(const Message&) const = default;
};

// A correction conversation: user turns carry the per-segment guidance,
// assistant turns the corrected segments. Message 0 additionally carries
// the instruction and the full pre-recognized text, so K segments give
// exactly 2K messages.
struct Conversation {
  std::vector<Message> messages;
  size_t n_segments = 0;

  bool operator==(const Conversation&) const = default;
};

// Separator between instruction, full-text context and first guidance.
inline constexpr std::string_view kTurnSeparator = "\n\n";

// Shipped default instruction: fix recognition errors, restore punctuation,
// write numbers in written form, answer with the corrected segment only.
extern const char kDefaultInstruction[];

// The per-turn user content for a segment.
// Throws ConfigError in pinyin mode without a table.
std::string Guidance(const SegmentPair& segment, GuidanceMode mode,
                     const PinyinTable* pinyin);

// Inference layout: every assistant slot is an empty placeholder to be
// filled turn by turn. Throws ConfigError when `segments` is empty or the
// hypothesis segments do not concatenate to full_hyp.
Conversation BuildConversation(std::string_view full_hyp,
                               std::span<const SegmentPair> segments,
                               GuidanceMode mode, std::string_view instruction,
                               const PinyinTable* pinyin);

// Training layout: assistant turns hold the reference segments.
// Throws ConfigError when a segment lacks its reference.
Conversation BuildTrainingConversation(std::string_view full_hyp,
                                       std::span<const SegmentPair> segments,
                                       GuidanceMode mode,
                                       std::string_view instruction,
                                       const PinyinTable* pinyin);

enum class Completeness {
  kPrefix,    // assistant placeholders may be empty, trailing user turn ok
  kComplete,  // 2 * n_segments messages, all non-empty
};

// Throws ParseError describing the first violated invariant.
void ValidateConversation(const Conversation& conversation,
                          Completeness completeness);

// Wire format: {"messages": [{"role": "user"|"assistant", "content": str}]}
nlohmann::json ToWire(const Conversation& conversation);
nlohmann::json MessagesToJson(std::span<const Message> messages);
// Throws ParseError on unknown roles or missing fields. n_segments is the
// number of user turns.
Conversation FromWire(const nlohmann::json& j);

// ceil(0.67 * code points). A heuristic for Chinese-heavy text, not the
// count of any particular tokenizer.
int64_t EstimateTokens(std::string_view text);

// The full text appears three times over a session: as context, as the
// per-segment guidance and as the corrected output.
int64_t EstimateSessionTokens(std::string_view hyp_text);
inline int64_t EstimateSessionTokens(const Document& doc) {
  return EstimateSessionTokens(doc.hyp_text);
}

inline constexpr int64_t kDefaultContextLimitTokens = 256000;

struct TrainingExportOptions {
  SegmentOptions segmentation;
  GuidanceMode guidance = GuidanceMode::kHypothesis;
  const PinyinTable* pinyin = nullptr;
  std::string instruction = kDefaultInstruction;
};

struct TrainingExportSummary {
  size_t documents = 0;
  size_t segments = 0;
  size_t messages = 0;
};

// One training conversation per document, one JSON object per line.
// Throws ConfigError naming the first document without a reference.
TrainingExportSummary ExportTrainingChats(std::span<const Document> docs,
                                          const TrainingExportOptions& options,
                                          std::ostream& out);

}  // namespace coc

#endif  // COC_CHAT_H_
