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

#include "coc/http_client.h"

#include <utility>

#include "httplib.h"

#include "coc/errors.h"

namespace coc {

nlohmann::json BuildChatRequest(const std::string& model,
                                std::span<const Message> messages,
                                double temperature) {
  return {{"model", model},
          {"messages", MessagesToJson(messages)},
          {"temperature", temperature}};
}

std::string ParseChatResponse(const std::string& body) {
  const auto j = nlohmann::json::parse(body, nullptr, false);
  if (j.is_discarded()) throw ClientError("backend returned invalid JSON");
  try {
    const auto& content = j.at("choices").at(0).at("message").at("content");
    if (!content.is_string()) throw ClientError("message content is not a string");
    return content.get<std::string>();
  } catch (const nlohmann::json::exception&) {
    throw ClientError("backend response has no choices[0].message.content");
  }
}

HttpClient::HttpClient(HttpClientOptions options)
    : options_(std::move(options)) {
  const std::string& url = options_.endpoint;
  const size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("endpoint must be an http(s) URL: " + url);
  }
  const std::string scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw ConfigError("unsupported endpoint scheme: " + scheme);
  }
  const size_t path_begin = url.find('/', scheme_end + 3);
  origin_ = url.substr(0, path_begin);
  path_ = path_begin == std::string::npos ? "/" : url.substr(path_begin);
  if (origin_.size() <= scheme_end + 3) {
    throw ConfigError("endpoint has no host: " + url);
  }
}

std::string HttpClient::Complete(const CompletionRequest& request) {
  // One connection per call keeps the client usable from several threads.
  httplib::Client http(origin_);
  http.set_connection_timeout(options_.timeout_seconds, 0);
  http.set_read_timeout(options_.timeout_seconds, 0);
  http.set_write_timeout(options_.timeout_seconds, 0);
  httplib::Headers headers;
  if (!options_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + options_.api_key);
  }
  const std::string body =
      BuildChatRequest(options_.model, request.messages, request.temperature)
          .dump();
  auto res = http.Post(path_, headers, body, "application/json");
  if (!res) {
    throw ClientError("request to " + options_.endpoint +
                      " failed: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw ClientError("backend returned HTTP " + std::to_string(res->status) +
                      ": " + res->body.substr(0, 200));
  }
  return ParseChatResponse(res->body);
}

}  // namespace coc
