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

#include "coc/chat.h"

#include <utility>

#include "coc/errors.h"

namespace coc {

const char kDefaultInstruction[] =
    "下面是一篇语音识别（ASR）转写的全文，其中可能包含识别错误、标点缺失或错误，"
    "以及未规范化的数字、日期等口语表达。接下来我会逐段给出识别结果，"
    "请结合全文语境逐段纠错：修正识别错误，恢复标点符号，并将口语表达转换为规范的书面形式。"
    "每次只输出纠正后的该段文本，不要输出任何解释。";

const char* RoleName(Role role) {
  return role == Role::kUser ? "user" : "assistant";
}

const char* GuidanceName(GuidanceMode mode) {
  return mode == GuidanceMode::kHypothesis ? "hyp" : "pinyin";
}

GuidanceMode ParseGuidance(std::string_view name) {
  if (name == "hyp") return GuidanceMode::kHypothesis;
  if (name == "pinyin") return GuidanceMode::kPinyin;
  throw ConfigError("unknown guidance mode \"" + std::string(name) +
                    "\" (expected hyp or pinyin)");
}

std::string Guidance(const SegmentPair& segment, GuidanceMode mode,
                     const PinyinTable* pinyin) {
  if (mode == GuidanceMode::kHypothesis) return segment.hyp_segment;
  if (pinyin == nullptr) {
    throw ConfigError("pinyin guidance requires a pinyin table");
  }
  return ToPinyin(segment.hyp_segment, *pinyin);
}

namespace {

void CheckSegments(std::string_view full_hyp,
                   std::span<const SegmentPair> segments) {
  if (segments.empty()) throw ConfigError("conversation needs at least one segment");
  std::string joined;
  for (const SegmentPair& s : segments) joined += s.hyp_segment;
  if (joined != full_hyp) {
    throw ConfigError("hypothesis segments do not concatenate to the full text");
  }
}

}  // namespace

Conversation BuildConversation(std::string_view full_hyp,
                               std::span<const SegmentPair> segments,
                               GuidanceMode mode, std::string_view instruction,
                               const PinyinTable* pinyin) {
  CheckSegments(full_hyp, segments);
  Conversation conv;
  conv.n_segments = segments.size();
  conv.messages.reserve(2 * segments.size());
  for (size_t k = 0; k < segments.size(); ++k) {
    std::string content;
    if (k == 0) {
      content.append(instruction);
      content.append(kTurnSeparator);
      content.append(full_hyp);
      content.append(kTurnSeparator);
    }
    content += Guidance(segments[k], mode, pinyin);
    conv.messages.push_back({Role::kUser, std::move(content)});
    conv.messages.push_back({Role::kAssistant, std::string()});
  }
  return conv;
}

Conversation BuildTrainingConversation(std::string_view full_hyp,
                                       std::span<const SegmentPair> segments,
                                       GuidanceMode mode,
                                       std::string_view instruction,
                                       const PinyinTable* pinyin) {
  Conversation conv =
      BuildConversation(full_hyp, segments, mode, instruction, pinyin);
  for (size_t k = 0; k < segments.size(); ++k) {
    if (!segments[k].ref_segment) {
      throw ConfigError("segment " + std::to_string(k) + " has no reference");
    }
    conv.messages[2 * k + 1].content = *segments[k].ref_segment;
  }
  return conv;
}

void ValidateConversation(const Conversation& conversation,
                          Completeness completeness) {
  const auto& msgs = conversation.messages;
  if (msgs.empty()) throw ParseError("conversation has no messages");
  if (conversation.n_segments == 0) {
    throw ParseError("conversation has no segments");
  }
  const size_t expected = 2 * conversation.n_segments;
  if (completeness == Completeness::kComplete ? msgs.size() != expected
                                              : msgs.size() > expected) {
    throw ParseError("conversation has " + std::to_string(msgs.size()) +
                     " messages for " +
                     std::to_string(conversation.n_segments) + " segments");
  }
  for (size_t k = 0; k < msgs.size(); ++k) {
    const Role want = k % 2 == 0 ? Role::kUser : Role::kAssistant;
    if (msgs[k].role != want) {
      throw ParseError("message " + std::to_string(k) + " should have role " +
                       RoleName(want));
    }
    const bool may_be_empty = want == Role::kAssistant &&
                              completeness == Completeness::kPrefix;
    if (msgs[k].content.empty() && !may_be_empty) {
      throw ParseError("message " + std::to_string(k) + " is empty");
    }
  }
}

nlohmann::json MessagesToJson(std::span<const Message> messages) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Message& m : messages) {
    arr.push_back({{"role", RoleName(m.role)}, {"content", m.content}});
  }
  return arr;
}

nlohmann::json ToWire(const Conversation& conversation) {
  return {{"messages", MessagesToJson(conversation.messages)}};
}

Conversation FromWire(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("messages") || !j["messages"].is_array()) {
    throw ParseError("expected {\"messages\": [...]}");
  }
  Conversation conv;
  for (const auto& m : j["messages"]) {
    if (!m.is_object() || !m.contains("role") || !m["role"].is_string() ||
        !m.contains("content") || !m["content"].is_string()) {
      throw ParseError("message needs string \"role\" and \"content\"");
    }
    const std::string role = m["role"].get<std::string>();
    Message msg;
    if (role == "user") {
      msg.role = Role::kUser;
      ++conv.n_segments;
    } else if (role == "assistant") {
      msg.role = Role::kAssistant;
    } else {
      throw ParseError("unknown role \"" + role + "\"");
    }
    msg.content = m["content"].get<std::string>();
    conv.messages.push_back(std::move(msg));
  }
  return conv;
}

int64_t EstimateTokens(std::string_view text) {
  // Integer arithmetic: 0.67 * n in floating point can round above an
  // exact integer and push the ceiling up by one.
  const int64_t n = static_cast<int64_t>(CountCodePoints(text));
  return (67 * n + 99) / 100;
}

int64_t EstimateSessionTokens(std::string_view hyp_text) {
  return 3 * EstimateTokens(hyp_text);
}

TrainingExportSummary ExportTrainingChats(std::span<const Document> docs,
                                          const TrainingExportOptions& options,
                                          std::ostream& out) {
  TrainingExportSummary summary;
  for (const Document& doc : docs) {
    if (!doc.ref_text) {
      throw ConfigError("document \"" + doc.id + "\" has no reference text");
    }
    const auto segments = Segmentize(doc, options.segmentation);
    Conversation conv;
    try {
      conv = BuildTrainingConversation(doc.hyp_text, segments, options.guidance,
                                       options.instruction, options.pinyin);
      ValidateConversation(conv, Completeness::kComplete);
    } catch (const std::exception& e) {
      throw ConfigError("document \"" + doc.id + "\": " + e.what());
    }
    out << ToWire(conv).dump() << '\n';
    ++summary.documents;
    summary.segments += segments.size();
    summary.messages += conv.messages.size();
  }
  return summary;
}

}  // namespace coc
