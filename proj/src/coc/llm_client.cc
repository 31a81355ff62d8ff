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

#include "coc/llm_client.h"

#include <utility>

#include "coc/errors.h"

namespace coc {

std::string IdentityClient::Complete(const CompletionRequest& request) {
  if (request.segment == nullptr) {
    throw ClientError("identity client needs the segment being corrected");
  }
  return request.segment->hyp_segment;
}

std::string OracleClient::Complete(const CompletionRequest& request) {
  if (request.segment == nullptr || !request.segment->ref_segment) {
    throw ClientError("oracle client needs a reference segment (document \"" +
                      std::string(request.doc_id) + "\")");
  }
  return *request.segment->ref_segment;
}

nlohmann::json ReplayRecordToJson(const ReplayRecord& record) {
  return {{"doc_id", record.doc_id},
          {"segment_index", record.segment_index},
          {"attempt", record.attempt},
          {"output", record.output}};
}

std::unique_ptr<ReplayClient> ReplayClient::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open replay file: " + path);
  return Parse(in, path);
}

std::unique_ptr<ReplayClient> ReplayClient::Parse(
    std::istream& in, const std::string& source_name) {
  auto client = std::unique_ptr<ReplayClient>(new ReplayClient());
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto j = nlohmann::json::parse(line, nullptr, false);
    try {
      if (j.is_discarded() || !j.is_object()) throw ParseError("invalid JSON");
      client->outputs_.insert_or_assign(
          Key{j.at("doc_id").get<std::string>(),
              j.at("segment_index").get<size_t>(),
              j.at("attempt").get<size_t>()},
          j.at("output").get<std::string>());
    } catch (const std::exception& e) {
      throw ParseError(source_name + ":" + std::to_string(line_no) +
                       ": bad replay record: " + e.what());
    }
  }
  return client;
}

std::string ReplayClient::Complete(const CompletionRequest& request) {
  auto it = outputs_.find(std::make_tuple(std::string(request.doc_id),
                                          request.segment_index,
                                          request.attempt));
  if (it == outputs_.end()) {
    throw ClientError("no recorded output for document \"" +
                      std::string(request.doc_id) + "\" segment " +
                      std::to_string(request.segment_index) + " attempt " +
                      std::to_string(request.attempt));
  }
  return it->second;
}

RecordingClient::RecordingClient(std::shared_ptr<LlmClient> inner,
                                 const std::string& path)
    : inner_(std::move(inner)),
      out_(path, std::ios::binary | std::ios::app) {
  if (!out_) throw IoError("cannot open record file: " + path);
}

std::string RecordingClient::Complete(const CompletionRequest& request) {
  std::string output = inner_->Complete(request);
  const std::string line =
      ReplayRecordToJson({std::string(request.doc_id), request.segment_index,
                          request.attempt, output})
          .dump();
  std::lock_guard<std::mutex> lock(mu_);
  out_ << line << '\n';
  out_.flush();
  return output;
}

}  // namespace coc
