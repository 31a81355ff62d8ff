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

#ifndef COC_WORKFLOW_H_
#define COC_WORKFLOW_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coc/align.h"
#include "coc/chat.h"
#include "coc/engine.h"
#include "coc/noise.h"

namespace coc {

// File-level pipelines behind the command-line tool.

struct PrepareOptions {
  TrainingExportOptions export_options;
  // Re-check that segments concatenate back to both texts.
  bool check_round_trip = false;
};

TrainingExportSummary Prepare(const std::string& corpus_path,
                              const std::string& out_path,
                              const PrepareOptions& options);

struct SimulateSummary {
  size_t documents = 0;
  size_t clean_tokens = 0;
  size_t injected_edits = 0;
};

// Input JSONL lines are {"id": str, "text": str} (or "ref" instead of
// "text"); output is a corpus whose ref is the clean text and hyp the
// corrupted one. Each document's noise stream is seeded by (seed, id).
SimulateSummary Simulate(const std::string& clean_path,
                         const std::string& out_path,
                         const NoiseProfile& profile, uint64_t seed);

struct CorrectSummary {
  size_t documents = 0;
  size_t failed = 0;
  size_t segments = 0;
  size_t accepted = 0;
  std::vector<DocumentFailure> failures;
  std::optional<MetricReport> report;  // when some document has a reference
};

// Writes into out_dir: corrected.jsonl (corpus format, hyp = corrected
// text), sessions.jsonl, failures.jsonl, report.json and report.txt.
CorrectSummary Correct(const std::string& corpus_path,
                       const std::string& out_dir, LlmClient& client,
                       const EngineConfig& config,
                       const BatchOptions& options);

struct SweepRow {
  double threshold = 0;
  double er_mandarin = 0;
  std::optional<double> err_mandarin;
  double correction_ratio = 0;
};

// Header written first: threshold,er_mandarin,err_mandarin,correction_ratio
inline constexpr char kSweepCsvHeader[] =
    "threshold,er_mandarin,err_mandarin,correction_ratio";

// Re-runs the batch once per threshold (typically over a replay client)
// and writes one CSV row each. Rates are ratios, not percentages.
std::vector<SweepRow> Sweep(const std::string& corpus_path,
                            const std::string& csv_path, LlmClient& client,
                            const EngineConfig& config,
                            const BatchOptions& options,
                            std::span<const double> thresholds);

// Scores the hyp field of `hyp_path` against references. With a
// reference corpus, documents are matched by id, and that corpus's own hyp
// field serves as the baseline (err attached). Without one, hyp_path must
// carry references itself. Throws ParseError for missing ids or refs.
MetricReport Evaluate(const std::string& hyp_path,
                      const std::optional<std::string>& ref_path);

}  // namespace coc

#endif  // COC_WORKFLOW_H_
