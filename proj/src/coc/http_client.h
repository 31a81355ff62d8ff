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

#ifndef COC_HTTP_CLIENT_H_
#define COC_HTTP_CLIENT_H_

#include <span>
#include <string>

#include "json.hpp"

#include "coc/chat.h"
#include "coc/llm_client.h"

namespace coc {

struct HttpClientOptions {
  // Full URL of an OpenAI-compatible chat-completion route, e.g.
  // "http://localhost:8000/v1/chat/completions".
  std::string endpoint;
  std::string model;
  std::string api_key;  // sent as a bearer token when non-empty
  int timeout_seconds = 300;
};

// {"model": ..., "messages": [...], "temperature": ...}
nlohmann::json BuildChatRequest(const std::string& model,
                                std::span<const Message> messages,
                                double temperature);

// Extracts choices[0].message.content. Throws ClientError.
std::string ParseChatResponse(const std::string& body);

class HttpClient final : public LlmClient {
 public:
  // Throws ConfigError for an unparsable endpoint.
  explicit HttpClient(HttpClientOptions options);

  std::string Complete(const CompletionRequest& request) override;

 private:
  HttpClientOptions options_;
  std::string origin_;  // scheme://host[:port]
  std::string path_;
};

}  // namespace coc

#endif  // COC_HTTP_CLIENT_H_
