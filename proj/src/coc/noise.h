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

#ifndef COC_NOISE_H_
#define COC_NOISE_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "json.hpp"

namespace coc {

// Synthetic ASR error model used to build desk-scale corpora.
struct NoiseProfile {
  double sub_rate = 0;
  double del_rate = 0;
  double ins_rate = 0;
  double punct_drop_rate = 0;
  double number_verbalize_rate = 0;
  bool lowercase_english = false;
  double filler_rate = 0;
  uint64_t seed = 0;

  // Throws ConfigError unless every rate is in [0, 1].
  void Validate() const;

  nlohmann::json ToJson() const;
  // Missing keys keep their defaults; unknown keys are rejected.
  static NoiseProfile FromJson(const nlohmann::json& j);
};

struct NoiseResult {
  std::string text;
  // Token-level edits introduced; an upper bound on the edit distance
  // between the clean and noisy token sequences.
  size_t edits = 0;
  size_t punctuation_dropped = 0;
};

// Corrupts `clean` token by token. Every token consumes the same number of
// random draws whatever happens to it, so raising one rate never changes the
// decisions driven by the others. Deterministic for a fixed profile.seed.
NoiseResult InjectNoiseWithStats(std::string_view clean,
                                 const NoiseProfile& profile);
std::string InjectNoise(std::string_view clean, const NoiseProfile& profile);

// Reads digits one by one in Chinese ("2024" -> "二零二四", "3.5" -> "三点五").
std::string VerbalizeDigits(std::string_view number);

}  // namespace coc

#endif  // COC_NOISE_H_
