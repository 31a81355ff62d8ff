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

#include "coc/workflow.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "coc/corpus.h"
#include "coc/errors.h"
#include "coc/random.h"

namespace coc {

namespace {

std::ofstream OpenOutput(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  return out;
}

void CheckReportInvariants(const MetricReport& report) {
  if (!report.IsAdditive()) {
    throw std::logic_error("category counts do not add up to the overall counts");
  }
}

}  // namespace

TrainingExportSummary Prepare(const std::string& corpus_path,
                              const std::string& out_path,
                              const PrepareOptions& options) {
  const std::vector<Document> docs = LoadCorpus(corpus_path);
  if (options.check_round_trip) {
    for (const Document& doc : docs) {
      std::string hyp, ref;
      for (const SegmentPair& s :
           Segmentize(doc, options.export_options.segmentation)) {
        hyp += s.hyp_segment;
        if (s.ref_segment) ref += *s.ref_segment;
      }
      if (hyp != doc.hyp_text || (doc.ref_text && ref != *doc.ref_text)) {
        throw std::logic_error("segments of document \"" + doc.id +
                               "\" do not concatenate to its texts");
      }
    }
  }
  std::ofstream out = OpenOutput(out_path);
  const TrainingExportSummary summary =
      ExportTrainingChats(docs, options.export_options, out);
  out.flush();
  if (!out) throw IoError("write failed: " + out_path);
  return summary;
}

SimulateSummary Simulate(const std::string& clean_path,
                         const std::string& out_path,
                         const NoiseProfile& profile, uint64_t seed) {
  profile.Validate();
  std::ifstream in(clean_path, std::ios::binary);
  if (!in) throw IoError("cannot open " + clean_path);

  SimulateSummary summary;
  std::vector<Document> docs;
  std::unordered_set<std::string> seen;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto fail = [&](const std::string& why) {
      throw ParseError(clean_path + ":" + std::to_string(line_no) + ": " + why);
    };
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) fail("invalid JSON object");
    if (!j.contains("id") || !j["id"].is_string()) fail("missing string \"id\"");
    const char* text_key = j.contains("text") ? "text" : "ref";
    if (!j.contains(text_key) || !j[text_key].is_string()) {
      fail("missing string \"text\"");
    }
    Document doc;
    doc.id = j["id"].get<std::string>();
    if (!seen.insert(doc.id).second) fail("duplicate document id \"" + doc.id + "\"");
    const std::string clean = j[text_key].get<std::string>();
    if (Tokenize(clean).empty()) fail("empty text");

    NoiseProfile p = profile;
    p.seed = DeriveSeed(seed, doc.id);
    NoiseResult noisy = InjectNoiseWithStats(clean, p);
    if (Tokenize(noisy.text).empty()) {
      // Everything was deleted; a document needs a hypothesis.
      noisy.text = clean;
      noisy.edits = 0;
    }
    summary.clean_tokens += Tokenize(clean).size();
    summary.injected_edits += noisy.edits;
    doc.ref_text = clean;
    doc.hyp_text = std::move(noisy.text);
    docs.push_back(std::move(doc));
  }
  summary.documents = docs.size();
  SaveCorpus(docs, out_path);
  return summary;
}

CorrectSummary Correct(const std::string& corpus_path,
                       const std::string& out_dir, LlmClient& client,
                       const EngineConfig& config,
                       const BatchOptions& options) {
  const std::vector<Document> docs = LoadCorpus(corpus_path);
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);

  BatchResult batch = RunBatch(docs, client, config, options);

  std::ofstream corrected = OpenOutput((dir / "corrected.jsonl").string());
  std::ofstream sessions = OpenOutput((dir / "sessions.jsonl").string());
  std::ofstream failures = OpenOutput((dir / "failures.jsonl").string());
  for (size_t k = 0; k < docs.size(); ++k) {
    if (!batch.sessions[k]) continue;
    Document out_doc;
    out_doc.id = docs[k].id;
    out_doc.hyp_text = batch.sessions[k]->corrected_text;
    out_doc.ref_text = docs[k].ref_text;
    corrected << DocumentToJson(out_doc).dump() << '\n';
    sessions << batch.sessions[k]->ToJson().dump() << '\n';
  }
  for (const DocumentFailure& f : batch.failures) {
    failures << nlohmann::json{{"doc_id", f.doc_id}, {"error", f.message}}.dump()
             << '\n';
  }

  CorrectSummary summary;
  summary.documents = docs.size();
  summary.failed = batch.failures.size();
  summary.failures = batch.failures;
  summary.segments = batch.total_segments;
  summary.accepted = batch.accepted_segments;
  if (batch.scored_documents > 0) {
    CheckReportInvariants(batch.report);
    summary.report = batch.report;
    nlohmann::json report = batch.report.ToJson();
    report["baseline"] = batch.baseline.ToJson();
    report["correction_ratio"] = batch.correction_ratio();
    report["documents"] = batch.scored_documents;
    OpenOutput((dir / "report.json").string()) << report.dump(2) << '\n';
    OpenOutput((dir / "report.txt").string()) << batch.report.FormatTable();
  }
  return summary;
}

std::vector<SweepRow> Sweep(const std::string& corpus_path,
                            const std::string& csv_path, LlmClient& client,
                            const EngineConfig& config,
                            const BatchOptions& options,
                            std::span<const double> thresholds) {
  const std::vector<Document> docs = LoadCorpus(corpus_path);
  std::vector<SweepRow> rows;
  for (double t : thresholds) {
    EngineConfig cfg = config;
    cfg.threshold = t;
    const BatchResult batch = RunBatch(docs, client, cfg, options);
    if (!batch.failures.empty()) {
      throw ClientError("threshold " + std::to_string(t) + ": document \"" +
                        batch.failures.front().doc_id +
                        "\" failed: " + batch.failures.front().message);
    }
    SweepRow row;
    row.threshold = t;
    row.er_mandarin = batch.report.at(Category::kMandarin).er();
    row.err_mandarin = batch.report.at(Category::kMandarin).err;
    row.correction_ratio = batch.correction_ratio();
    rows.push_back(row);
  }

  std::ofstream out = OpenOutput(csv_path);
  out << kSweepCsvHeader << '\n';
  char buf[160];
  for (const SweepRow& r : rows) {
    std::string err = "";
    if (r.err_mandarin) {
      char e[32];
      std::snprintf(e, sizeof(e), "%.6f", *r.err_mandarin);
      err = e;
    }
    std::snprintf(buf, sizeof(buf), "%g,%.6f,%s,%.6f\n", r.threshold,
                  r.er_mandarin, err.c_str(), r.correction_ratio);
    out << buf;
  }
  return rows;
}

MetricReport Evaluate(const std::string& hyp_path,
                      const std::optional<std::string>& ref_path) {
  const std::vector<Document> hyps = LoadCorpus(hyp_path);
  MetricReport report;
  if (!ref_path) {
    for (const Document& doc : hyps) {
      if (!doc.ref_text) {
        throw ParseError(hyp_path + ": document \"" + doc.id +
                         "\" has no \"ref\"");
      }
      report += CategorizedReport(*doc.ref_text, doc.hyp_text);
    }
    CheckReportInvariants(report);
    return report;
  }

  const std::vector<Document> refs = LoadCorpus(*ref_path);
  std::unordered_map<std::string, const Document*> by_id;
  for (const Document& doc : hyps) by_id.emplace(doc.id, &doc);
  if (hyps.size() != refs.size()) {
    throw ParseError(hyp_path + " has " + std::to_string(hyps.size()) +
                     " documents but " + *ref_path + " has " +
                     std::to_string(refs.size()));
  }
  MetricReport baseline;
  for (const Document& ref_doc : refs) {
    if (!ref_doc.ref_text) {
      throw ParseError(*ref_path + ": document \"" + ref_doc.id +
                       "\" has no \"ref\"");
    }
    auto it = by_id.find(ref_doc.id);
    if (it == by_id.end()) {
      throw ParseError(hyp_path + ": document \"" + ref_doc.id + "\" is missing");
    }
    report += CategorizedReport(*ref_doc.ref_text, it->second->hyp_text);
    baseline += CategorizedReport(*ref_doc.ref_text, ref_doc.hyp_text);
  }
  report.AttachBaseline(baseline);
  CheckReportInvariants(report);
  CheckReportInvariants(baseline);
  return report;
}

}  // namespace coc
