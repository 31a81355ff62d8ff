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

#ifndef COC_LLM_CLIENT_H_
#define COC_LLM_CLIENT_H_

#include <cstddef>
#include <fstream>
#include <istream>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <tuple>

#include "coc/chat.h"
#include "coc/corpus.h"

namespace coc {

struct CompletionRequest {
  std::string_view doc_id;
  size_t segment_index = 0;
  size_t attempt = 0;  // 0 for the first query, then one per retry
  double temperature = 0;
  // Conversation so far, ending with the user turn of this segment.
  std::span<const Message> messages;
  // The segment being corrected. Mock clients read it; real backends only
  // see `messages`.
  const SegmentPair* segment = nullptr;
};

// A chat-completion backend. Implementations must be safe to call from
// several threads at once. Failures are reported as ClientError.
class LlmClient {
 public:
  virtual ~LlmClient() = default;
  virtual std::string Complete(const CompletionRequest& request) = 0;
};

// Returns the pre-recognized segment unchanged.
class IdentityClient final : public LlmClient {
 public:
  std::string Complete(const CompletionRequest& request) override;
};

// Returns the reference segment.
class OracleClient final : public LlmClient {
 public:
  std::string Complete(const CompletionRequest& request) override;
};

struct ReplayRecord {
  std::string doc_id;
  size_t segment_index = 0;
  size_t attempt = 0;
  std::string output;
};

nlohmann::json ReplayRecordToJson(const ReplayRecord& record);

// Serves outputs recorded earlier, keyed by (doc_id, segment_index,
// attempt). Record file: JSONL of {doc_id, segment_index, attempt, output};
// when a key repeats the later line wins.
class ReplayClient final : public LlmClient {
 public:
  static std::unique_ptr<ReplayClient> Load(const std::string& path);
  static std::unique_ptr<ReplayClient> Parse(std::istream& in,
                                             const std::string& source_name);

  std::string Complete(const CompletionRequest& request) override;
  size_t size() const { return outputs_.size(); }

 private:
  using Key = std::tuple<std::string, size_t, size_t>;
  std::map<Key, std::string, std::less<>> outputs_;
};

// Forwards to `inner` and appends every successful completion to a record
// file readable by ReplayClient.
class RecordingClient final : public LlmClient {
 public:
  RecordingClient(std::shared_ptr<LlmClient> inner, const std::string& path);

  std::string Complete(const CompletionRequest& request) override;

 private:
  std::shared_ptr<LlmClient> inner_;
  std::mutex mu_;
  std::ofstream out_;
};

}  // namespace coc

#endif  // COC_LLM_CLIENT_H_
