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

#include "coc/corpus.h"

#include <algorithm>
#include <fstream>
#include <unordered_set>
#include <utility>

#include "coc/align.h"
#include "coc/errors.h"
#include "coc/random.h"
#include "coc/textproc.h"

namespace coc {

namespace {

bool IsBlank(const std::string& line) {
  return std::all_of(line.begin(), line.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
  });
}

Document ParseDocumentLine(const std::string& line) {
  const auto j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded()) throw ParseError("invalid JSON");
  if (!j.is_object()) throw ParseError("expected a JSON object");

  Document doc;
  auto it = j.find("id");
  if (it == j.end() || !it->is_string()) {
    throw ParseError("missing string field \"id\"");
  }
  doc.id = it->get<std::string>();
  if (doc.id.empty()) throw ParseError("empty \"id\"");

  it = j.find("hyp");
  if (it == j.end() || !it->is_string()) {
    throw ParseError("missing string field \"hyp\"");
  }
  doc.hyp_text = it->get<std::string>();
  if (doc.hyp_text.empty()) throw ParseError("empty \"hyp\"");

  it = j.find("ref");
  if (it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw ParseError("\"ref\" must be a string");
    doc.ref_text = it->get<std::string>();
  }

  it = j.find("segments");
  if (it != j.end() && !it->is_null()) {
    if (!it->is_array() || it->empty()) {
      throw ParseError("\"segments\" must be a non-empty array of strings");
    }
    std::vector<std::string> pieces;
    std::string joined;
    for (const auto& piece : *it) {
      if (!piece.is_string()) {
        throw ParseError("\"segments\" must be a non-empty array of strings");
      }
      pieces.push_back(piece.get<std::string>());
      joined += pieces.back();
    }
    if (joined != doc.hyp_text) {
      throw ParseError("\"segments\" do not concatenate to \"hyp\"");
    }
    doc.segments = std::move(pieces);
  }
  return doc;
}

}  // namespace

std::vector<Document> ParseCorpus(std::istream& in,
                                  const std::string& source_name) {
  std::vector<Document> docs;
  std::unordered_set<std::string> seen;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (IsBlank(line)) continue;
    Document doc;
    try {
      doc = ParseDocumentLine(line);
    } catch (const ParseError& e) {
      throw ParseError(source_name + ":" + std::to_string(line_no) + ": " +
                       e.what());
    }
    if (!seen.insert(doc.id).second) {
      throw ParseError(source_name + ":" + std::to_string(line_no) +
                       ": duplicate document id \"" + doc.id + "\"");
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::vector<Document> LoadCorpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open corpus: " + path);
  return ParseCorpus(in, path);
}

nlohmann::json DocumentToJson(const Document& doc) {
  nlohmann::json j;
  j["id"] = doc.id;
  j["hyp"] = doc.hyp_text;
  if (doc.ref_text) j["ref"] = *doc.ref_text;
  if (doc.segments) j["segments"] = *doc.segments;
  return j;
}

void WriteCorpus(std::span<const Document> docs, std::ostream& out) {
  for (const Document& doc : docs) out << DocumentToJson(doc).dump() << '\n';
}

void SaveCorpus(std::span<const Document> docs, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write corpus: " + path);
  WriteCorpus(docs, out);
  if (!out) throw IoError("write failed: " + path);
}

namespace {

struct HypGroup {
  size_t byte_end;
  size_t sentence_count;
};

bool IsWhitespaceOnly(std::string_view text) {
  for (const CodePoint& cp : DecodeUtf8(text)) {
    if (!IsWhitespace(cp.value)) return false;
  }
  return true;
}

std::vector<HypGroup> GroupSentences(const Document& doc,
                                     const SegmentOptions& options) {
  std::vector<HypGroup> groups;
  if (doc.segments) {
    size_t end = 0;
    for (const std::string& piece : *doc.segments) {
      end += piece.size();
      groups.push_back({end, std::max<size_t>(1, SplitSentences(piece).size())});
    }
    return groups;
  }

  std::vector<size_t> sentence_ends;
  size_t end = 0;
  for (const Sentence& s : SplitSentences(doc.hyp_text)) {
    end += s.text.size();
    if (!sentence_ends.empty() && IsWhitespaceOnly(s.text)) {
      sentence_ends.back() = end;
    } else {
      sentence_ends.push_back(end);
    }
  }

  SeededRng rng(DeriveSeed(options.seed, doc.id));
  size_t next = 0;
  while (next < sentence_ends.size()) {
    const size_t want = 1 + rng.Below(options.max_sentences);
    const size_t take = std::min(want, sentence_ends.size() - next);
    next += take;
    groups.push_back({sentence_ends[next - 1], take});
  }
  return groups;
}

}  // namespace

std::vector<SegmentPair> Segmentize(const Document& doc,
                                    const SegmentOptions& options) {
  if (doc.hyp_text.empty()) {
    throw ConfigError("document \"" + doc.id + "\" has an empty hypothesis");
  }
  if (options.max_sentences == 0) {
    throw ConfigError("max_sentences must be at least 1");
  }

  const std::vector<HypGroup> groups = GroupSentences(doc, options);
  const std::string& hyp = doc.hyp_text;

  // Reference cut (in bytes) for every hypothesis cut.
  std::vector<size_t> ref_ends;
  if (doc.ref_text) {
    const std::string& ref = *doc.ref_text;
    const auto hyp_tokens = Tokenize(hyp);
    const auto ref_tokens = Tokenize(ref);
    const Alignment alignment = Align(ref_tokens, hyp_tokens);
    for (size_t g = 0; g < groups.size(); ++g) {
      if (g + 1 == groups.size()) {
        ref_ends.push_back(ref.size());
        break;
      }
      const size_t cut = groups[g].byte_end;
      const size_t hyp_boundary = static_cast<size_t>(
          std::partition_point(hyp_tokens.begin(), hyp_tokens.end(),
                               [cut](const Token& t) {
                                 return t.byte_offset < cut;
                               }) -
          hyp_tokens.begin());
      const size_t r = ProjectBoundary(alignment, hyp_boundary);
      ref_ends.push_back(r == 0 ? 0 : ref_tokens[r - 1].byte_end());
    }
  }

  std::vector<SegmentPair> pairs;
  bool carry_into_next = false;
  size_t hyp_begin = 0, ref_begin = 0;
  for (size_t g = 0; g < groups.size(); ++g) {
    SegmentPair piece;
    piece.hyp_segment = hyp.substr(hyp_begin, groups[g].byte_end - hyp_begin);
    piece.sentence_count = groups[g].sentence_count;
    hyp_begin = groups[g].byte_end;
    bool ref_empty = false;
    if (doc.ref_text) {
      piece.ref_segment = doc.ref_text->substr(ref_begin, ref_ends[g] - ref_begin);
      ref_begin = ref_ends[g];
      ref_empty = Tokenize(*piece.ref_segment).empty();
    }

    if (carry_into_next) {
      SegmentPair& last = pairs.back();
      last.hyp_segment += piece.hyp_segment;
      if (last.ref_segment) *last.ref_segment += *piece.ref_segment;
      last.sentence_count += piece.sentence_count;
      carry_into_next = ref_empty;
      continue;
    }
    if (ref_empty && !pairs.empty()) {
      SegmentPair& last = pairs.back();
      last.hyp_segment += piece.hyp_segment;
      *last.ref_segment += *piece.ref_segment;
      last.sentence_count += piece.sentence_count;
      continue;
    }
    piece.index = pairs.size();
    pairs.push_back(std::move(piece));
    carry_into_next = ref_empty;
  }
  return pairs;
}

}  // namespace coc
