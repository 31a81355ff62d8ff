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

#ifndef COC_CORPUS_H_
#define COC_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace coc {

struct Document {
  std::string id;
  std::optional<std::string> ref_text;
  std::string hyp_text;
  // Externally provided hypothesis segmentation (e.g. VAD chunks). When set,
  // the pieces concatenate to hyp_text.
  std::optional<std::vector<std::string>> segments;
};

struct SegmentPair {
  size_t index = 0;
  std::string hyp_segment;
  std::optional<std::string> ref_segment;
  size_t sentence_count = 0;
};

// Corpus JSONL: {"id": str, "hyp": str, "ref": str?, "segments": [str]?}
// one object per line. Blank lines are ignored. Throws ParseError naming the
// line on malformed input and on duplicate ids.
std::vector<Document> ParseCorpus(std::istream& in,
                                  const std::string& source_name);
std::vector<Document> LoadCorpus(const std::string& path);

nlohmann::json DocumentToJson(const Document& doc);
void WriteCorpus(std::span<const Document> docs, std::ostream& out);
void SaveCorpus(std::span<const Document> docs, const std::string& path);

struct SegmentOptions {
  size_t max_sentences = 5;
  uint64_t seed = 0;
};

// Groups hypothesis sentences into segments of k sentences, k drawn
// uniformly from [1, max_sentences] from a stream seeded by (seed, doc.id).
// When doc.segments is set those pieces are used as-is. Reference segments
// (when doc.ref_text is present) come from projecting each hypothesis cut
// through the token alignment. A segment whose reference side would be
// empty is merged into its predecessor (or successor, for the first one).
//
// Whitespace-only trailing text is attached to the last sentence.
// Throws ConfigError for an empty hypothesis or max_sentences == 0.
std::vector<SegmentPair> Segmentize(const Document& doc,
                                    const SegmentOptions& options);

}  // namespace coc

#endif  // COC_CORPUS_H_
