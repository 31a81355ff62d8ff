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

#include "coc/engine.h"

#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>
#include <utility>

#include "coc/errors.h"
#include "coc/textproc.h"

namespace coc {

void EngineConfig::Validate() const {
  if (!(threshold > 0)) {
    throw ConfigError("correction threshold must be greater than 0");
  }
  if (max_retries < 0) throw ConfigError("max_retries must be >= 0");
  if (transport_retries < 0) throw ConfigError("transport_retries must be >= 0");
  if (context_limit_tokens <= 0) {
    throw ConfigError("context limit must be positive");
  }
  if (!(temperature >= 0) || !(retry_temperature >= 0)) {
    throw ConfigError("temperatures must be >= 0");
  }
  if (guidance == GuidanceMode::kPinyin && !pinyin) {
    throw ConfigError("pinyin guidance requires a pinyin table");
  }
}

nlohmann::json EngineConfig::ToJson() const {
  return {{"threshold", threshold},
          {"max_retries", max_retries},
          {"guidance", GuidanceName(guidance)},
          {"context_limit_tokens", context_limit_tokens},
          {"temperature", temperature},
          {"retry_temperature", retry_temperature},
          {"strict_context", strict_context},
          {"history", history == HistoryMode::kEmitted ? "emitted" : "model"},
          {"transport_retries", transport_retries},
          {"instruction", instruction}};
}

size_t SessionResult::accepted_count() const {
  size_t n = 0;
  for (const auto& d : decisions) n += d.accepted ? 1 : 0;
  return n;
}

nlohmann::json SessionResult::ToJson() const {
  nlohmann::json decisions_json = nlohmann::json::array();
  for (const SegmentDecision& d : decisions) {
    decisions_json.push_back(
        {{"index", d.index},
         {"model_output", d.model_output},
         {"gate_er", std::isfinite(d.gate_er) ? nlohmann::json(d.gate_er)
                                              : nlohmann::json(nullptr)},
         {"accepted", d.accepted},
         {"retries_used", d.retries_used},
         {"emitted", d.emitted}});
  }
  return {{"doc_id", doc_id},
          {"decisions", std::move(decisions_json)},
          {"corrected_text", corrected_text},
          {"correction_ratio", correction_ratio},
          {"transcript", ToWire(transcript)},
          {"warnings", warnings}};
}

double GateErrorRate(std::string_view pre_recognized,
                     std::string_view corrected) {
  return ErrorRate(pre_recognized, corrected);
}

namespace {

std::string CompleteWithRetries(LlmClient& client,
                                const CompletionRequest& request,
                                int transport_retries) {
  for (int attempt = 0;; ++attempt) {
    try {
      return client.Complete(request);
    } catch (const ClientError&) {
      if (attempt >= transport_retries) throw;
    }
  }
}

}  // namespace

SessionResult RunSession(const Document& doc,
                         std::span<const SegmentPair> segments,
                         LlmClient& client, const EngineConfig& config) {
  config.Validate();
  SessionResult result;
  result.doc_id = doc.id;

  const int64_t estimate = EstimateSessionTokens(doc);
  if (estimate > config.context_limit_tokens) {
    const std::string msg =
        "document \"" + doc.id + "\" needs about " + std::to_string(estimate) +
        " tokens, above the context limit of " +
        std::to_string(config.context_limit_tokens);
    if (config.strict_context) throw ContextOverflowError(msg);
    result.warnings.push_back(msg);
  }

  Conversation conv =
      BuildConversation(doc.hyp_text, segments, config.guidance,
                        config.instruction, config.pinyin.get());

  for (size_t k = 0; k < segments.size(); ++k) {
    const SegmentPair& segment = segments[k];
    CompletionRequest request;
    request.doc_id = doc.id;
    request.segment_index = k;
    request.messages = std::span<const Message>(conv.messages.data(), 2 * k + 1);
    request.segment = &segment;

    SegmentDecision decision;
    decision.index = k;
    for (int attempt = 0;; ++attempt) {
      request.attempt = static_cast<size_t>(attempt);
      request.temperature =
          attempt == 0 ? config.temperature : config.retry_temperature;
      try {
        decision.model_output =
            CompleteWithRetries(client, request, config.transport_retries);
      } catch (const ClientError& e) {
        result.transcript.messages.assign(conv.messages.begin(),
                                          conv.messages.begin() + 2 * k);
        result.transcript.n_segments = conv.n_segments;
        throw SessionError("document \"" + doc.id + "\" segment " +
                               std::to_string(k) + ": " + e.what(),
                           std::move(result));
      }
      decision.gate_er =
          GateErrorRate(segment.hyp_segment, decision.model_output);
      decision.accepted = decision.gate_er <= config.threshold;
      decision.retries_used = attempt;
      if (decision.accepted || attempt >= config.max_retries) break;
    }
    decision.emitted =
        decision.accepted ? decision.model_output : segment.hyp_segment;
    conv.messages[2 * k + 1].content = config.history == HistoryMode::kEmitted
                                           ? decision.emitted
                                           : decision.model_output;
    result.corrected_text += decision.emitted;
    result.decisions.push_back(std::move(decision));
  }

  result.correction_ratio = static_cast<double>(result.accepted_count()) /
                            static_cast<double>(result.decisions.size());
  result.transcript = std::move(conv);
  return result;
}

double BatchResult::correction_ratio() const {
  return total_segments == 0 ? 0.0
                             : static_cast<double>(accepted_segments) /
                                   static_cast<double>(total_segments);
}

BatchResult RunBatch(std::span<const Document> docs, LlmClient& client,
                     const EngineConfig& config, const BatchOptions& options) {
  config.Validate();
  if (options.segmentation.max_sentences == 0) {
    throw ConfigError("max_sentences must be at least 1");
  }

  struct Slot {
    std::optional<SessionResult> session;
    std::optional<std::string> error;
    std::optional<MetricReport> corrected;
    std::optional<MetricReport> baseline;
  };
  std::vector<Slot> slots(docs.size());
  std::atomic<size_t> next{0};

  auto worker = [&]() {
    for (size_t k = next++; k < docs.size(); k = next++) {
      const Document& doc = docs[k];
      Slot& slot = slots[k];
      try {
        const auto segments = Segmentize(doc, options.segmentation);
        slot.session = RunSession(doc, segments, client, config);
        if (doc.ref_text) {
          slot.corrected =
              CategorizedReport(*doc.ref_text, slot.session->corrected_text);
          slot.baseline = CategorizedReport(*doc.ref_text, doc.hyp_text);
        }
      } catch (const std::exception& e) {
        slot.session.reset();
        slot.error = e.what();
      }
    }
  };

  const size_t n_threads =
      std::max<size_t>(1, std::min(options.parallelism, docs.size()));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  BatchResult batch;
  batch.sessions.reserve(docs.size());
  for (size_t k = 0; k < docs.size(); ++k) {
    Slot& slot = slots[k];
    if (slot.error) {
      batch.failures.push_back({docs[k].id, *slot.error});
    } else {
      batch.accepted_segments += slot.session->accepted_count();
      batch.total_segments += slot.session->decisions.size();
      if (slot.corrected) {
        batch.report += *slot.corrected;
        batch.baseline += *slot.baseline;
        ++batch.scored_documents;
      }
    }
    batch.sessions.push_back(std::move(slot.session));
  }
  batch.report.AttachBaseline(batch.baseline);
  return batch;
}

}  // namespace coc
