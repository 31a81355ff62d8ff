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

#ifndef COC_ENGINE_H_
#define COC_ENGINE_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "coc/align.h"
#include "coc/chat.h"
#include "coc/corpus.h"
#include "coc/llm_client.h"

namespace coc {

// What the next turns see as the assistant's previous answer.
enum class HistoryMode {
  kEmitted,      // the text actually kept (the original when rejected)
  kModelOutput,  // whatever the model said, accepted or not
};

struct EngineConfig {
  // A correction is kept when its ER against the pre-recognized segment is
  // at most this value.
  double threshold = 0.3;
  int max_retries = 0;
  GuidanceMode guidance = GuidanceMode::kHypothesis;
  int64_t context_limit_tokens = kDefaultContextLimitTokens;
  double temperature = 0;
  // Used on retry attempts only.
  double retry_temperature = 0.7;
  // Abort instead of warning when a session may not fit the context.
  bool strict_context = false;
  HistoryMode history = HistoryMode::kEmitted;
  // Extra attempts after a ClientError before the session fails.
  int transport_retries = 2;
  std::string instruction = kDefaultInstruction;
  std::shared_ptr<const PinyinTable> pinyin;

  // Throws ConfigError.
  void Validate() const;
  nlohmann::json ToJson() const;
};

struct SegmentDecision {
  size_t index = 0;
  std::string model_output;  // output of the last attempt
  double gate_er = 0;
  bool accepted = false;
  int retries_used = 0;
  std::string emitted;
};

struct SessionResult {
  std::string doc_id;
  std::vector<SegmentDecision> decisions;
  std::string corrected_text;
  double correction_ratio = 0;
  Conversation transcript;
  std::vector<std::string> warnings;

  size_t accepted_count() const;
  nlohmann::json ToJson() const;
};

// Carries the turns completed before the failure.
class SessionError : public std::runtime_error {
 public:
  SessionError(const std::string& what, SessionResult partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const SessionResult& partial() const { return partial_; }

 private:
  SessionResult partial_;
};

// ER of `corrected` measured against the pre-recognized segment, which
// plays the reference role.
double GateErrorRate(std::string_view pre_recognized, std::string_view corrected);

// Corrects one document segment by segment. Each turn queries the client
// with the conversation so far, gates the answer on GateErrorRate() <=
// threshold, optionally retries, and appends the result to the history
// before moving on. Throws ConfigError for bad settings,
// ContextOverflowError under strict_context, SessionError when the client
// keeps failing.
SessionResult RunSession(const Document& doc,
                         std::span<const SegmentPair> segments,
                         LlmClient& client, const EngineConfig& config);

struct BatchOptions {
  SegmentOptions segmentation;
  size_t parallelism = 1;
};

struct DocumentFailure {
  std::string doc_id;
  std::string message;
};

struct BatchResult {
  // Parallel to the input documents; empty for failed ones.
  std::vector<std::optional<SessionResult>> sessions;
  std::vector<DocumentFailure> failures;
  // Micro-averaged over documents that have a reference and succeeded.
  MetricReport report;    // corrected vs reference, err attached
  MetricReport baseline;  // hypothesis vs reference
  size_t scored_documents = 0;
  size_t accepted_segments = 0;
  size_t total_segments = 0;

  double correction_ratio() const;
};

// Runs independent sessions with up to `parallelism` worker threads. A
// failing document is recorded and the batch continues.
BatchResult RunBatch(std::span<const Document> docs, LlmClient& client,
                     const EngineConfig& config, const BatchOptions& options);

}  // namespace coc

#endif  // COC_ENGINE_H_
