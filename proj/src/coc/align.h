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

#ifndef COC_ALIGN_H_
#define COC_ALIGN_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "coc/textproc.h"

namespace coc {

enum class EditKind { kMatch, kSubstitute, kDelete, kInsert };

// Match/Substitute carry both indices, Delete only ref_index, Insert only
// hyp_index.
struct EditOp {
  EditKind kind;
  std::optional<size_t> ref_index;
  std::optional<size_t> hyp_index;

  bool operator==(const EditOp&) const = default;
};

struct Alignment {
  std::vector<EditOp> ops;
  size_t substitutions = 0;
  size_t deletions = 0;
  size_t insertions = 0;
  size_t matches = 0;

  size_t distance() const { return substitutions + deletions + insertions; }
  size_t ref_size() const { return substitutions + deletions + matches; }
  size_t hyp_size() const { return substitutions + insertions + matches; }
};

// Alignments above this many DP cells are refused; split the input (for
// example per segment) instead.
inline constexpr uint64_t kMaxAlignmentCells = uint64_t{1} << 30;

// Unit-cost Levenshtein alignment with a full backtrace. Two tokens match
// only when their surfaces are byte-identical. Among minimum-cost paths the
// backtrace (walking from the end) prefers Match, then Substitute, then
// Delete, then Insert.
Alignment Align(std::span<const Token> ref, std::span<const Token> hyp);
Alignment Align(std::span<const std::string> ref,
                std::span<const std::string> hyp);

// (S + D + I) / |ref|. An empty reference gives 0 when the hypothesis is
// also empty and +infinity otherwise.
double ErrorRate(std::span<const Token> ref, std::span<const Token> hyp);
double ErrorRate(std::string_view ref_text, std::string_view hyp_text);

struct CategoryStats {
  uint64_t n_ref = 0;
  uint64_t s = 0;
  uint64_t d = 0;
  uint64_t i = 0;
  std::optional<double> err;  // relative change vs. a baseline, if attached

  uint64_t errors() const { return s + d + i; }
  // Same empty-reference convention as ErrorRate().
  double er() const;
  CategoryStats& operator+=(const CategoryStats& o);
};

// Error counts split by token category plus the overall totals.
// Substitutions and deletions are charged to the reference token's
// category, insertions to the inserted hypothesis token's category, so a
// category's ER can exceed 1.
struct MetricReport {
  std::array<CategoryStats, 4> categories{};
  CategoryStats overall;

  CategoryStats& at(Category c) {
    return categories[static_cast<size_t>(c)];
  }
  const CategoryStats& at(Category c) const {
    return categories[static_cast<size_t>(c)];
  }

  // Micro-averaging: counts are summed, rates recomputed from the sums.
  MetricReport& operator+=(const MetricReport& o);

  // Sets err on every category whose baseline ER is nonzero and finite;
  // clears it elsewhere.
  void AttachBaseline(const MetricReport& baseline);

  // Category S/D/I and n_ref sum to the overall values.
  bool IsAdditive() const;

  // {"mandarin": {"er", "err"?, "n_ref", "s", "d", "i"}, ..., "overall": ...}
  // er/err are ratios; an infinite er is written as null.
  nlohmann::json ToJson() const;
  static MetricReport FromJson(const nlohmann::json& j);

  // Fixed-width table, ER in percent with two decimals, signed ERR.
  std::string FormatTable() const;
};

MetricReport CategorizedReport(std::span<const Token> ref,
                               std::span<const Token> hyp);
MetricReport CategorizedReport(std::string_view ref_text,
                               std::string_view hyp_text);

// (er_corrected - er_baseline) / er_baseline; negative is an improvement.
// Throws std::domain_error when the baseline is zero (or not finite).
double RelativeErrorRateChange(double er_corrected, double er_baseline);

// Maps a cut between hypothesis tokens [0, hyp_boundary) | [hyp_boundary, ..)
// to the matching reference cut. Deletions sitting between the two sides
// go to the earlier side; boundary 0 maps to 0 and |hyp| maps to |ref|
// (an empty hypothesis maps to 0).
// Throws std::out_of_range when hyp_boundary > |hyp|.
size_t ProjectBoundary(const Alignment& alignment, size_t hyp_boundary);

}  // namespace coc

#endif  // COC_ALIGN_H_
