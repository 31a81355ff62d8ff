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

// Acceptance suite: one PASS / FAIL / SKIP line per criterion. Exits
// non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "coc/align.h"
#include "coc/chat.h"
#include "coc/corpus.h"
#include "coc/engine.h"
#include "coc/llm_client.h"
#include "coc/noise.h"
#include "coc/random.h"
#include "coc/textproc.h"
#include "coc/workflow.h"
#include "test_util.h"

namespace coc {
namespace {

enum class Status { kPass, kFail, kSkip };

struct Outcome {
  Status status;
  std::string detail;
};

Outcome Pass(std::string detail) { return {Status::kPass, std::move(detail)}; }
Outcome Fail(std::string detail) { return {Status::kFail, std::move(detail)}; }
Outcome Skip(std::string detail) { return {Status::kSkip, std::move(detail)}; }

std::string Fmt(const char* format, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c);
  return buf;
}

// ---- 1 ---------------------------------------------------------------

size_t RecursiveDistance(const std::vector<std::string>& a, size_t i,
                         const std::vector<std::string>& b, size_t j) {
  if (i == 0) return j;
  if (j == 0) return i;
  return std::min({RecursiveDistance(a, i - 1, b, j - 1) + (a[i - 1] != b[j - 1]),
                   RecursiveDistance(a, i - 1, b, j) + 1,
                   RecursiveDistance(a, i, b, j - 1) + 1});
}

Outcome AlignmentOracle() {
  constexpr int kPairs = 1000;
  static const char* const kAlphabet[] = {"w", "x", "y", "z"};
  SeededRng rng(20240601);
  const auto start = std::chrono::steady_clock::now();
  int mismatches = 0;
  for (int k = 0; k < kPairs; ++k) {
    std::vector<std::string> a(rng.Below(9)), b(rng.Below(9));
    for (auto& s : a) s = kAlphabet[rng.Below(4)];
    for (auto& s : b) s = kAlphabet[rng.Below(4)];
    const Alignment al = Align(a, b);
    if (al.distance() != RecursiveDistance(a, a.size(), b, b.size()) ||
        al.ref_size() != a.size() || al.hyp_size() != b.size()) {
      ++mismatches;
    }
  }
  const double seconds = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();
  const std::string detail =
      std::to_string(kPairs) + " pairs, " + std::to_string(mismatches) +
      " mismatches, " + Fmt("%.2f s", seconds);
  return mismatches == 0 && seconds < 10.0 ? Pass(detail) : Fail(detail);
}

// ---- 2 ---------------------------------------------------------------

Outcome ErrArithmetic() {
  const double a = RelativeErrorRateChange(7.03, 12.61) * 100;
  const double b = RelativeErrorRateChange(4.19, 5.97) * 100;
  const std::string detail =
      Fmt("err(7.03, 12.61) = %.4f%%, err(4.19, 5.97) = %.4f%%", a, b);
  return std::abs(a - -44.25) <= 0.02 && std::abs(b - -29.82) <= 0.02
             ? Pass(detail)
             : Fail(detail);
}

// ---- 3 ---------------------------------------------------------------

size_t TerminatedSentences(const std::string& text) {
  size_t n = 0;
  for (const Sentence& s : SplitSentences(text)) n += s.terminal.has_value();
  return n;
}

Outcome SegmentationRoundTrip(const testing::TempDir& dir) {
  constexpr size_t kSeeds = 4;
  constexpr size_t kPerSeed = 250;
  size_t docs_checked = 0, segments = 0, violations = 0;
  std::string first_violation;
  SeededRng text_rng(3);
  for (uint64_t seed = 0; seed < kSeeds; ++seed) {
    const std::string clean = dir.File("clean" + std::to_string(seed) + ".jsonl");
    const std::string noisy = dir.File("noisy" + std::to_string(seed) + ".jsonl");
    {
      std::ofstream out(clean);
      for (size_t k = 0; k < kPerSeed; ++k) {
        out << nlohmann::json{{"id", "s" + std::to_string(seed) + "_" +
                                         std::to_string(k)},
                              {"text", testing::CleanText(
                                           text_rng, 1 + text_rng.Below(30))}}
                   .dump()
            << '\n';
      }
    }
    Simulate(clean, noisy, testing::DefaultNoise(0), 1000 + seed);
    for (const Document& doc : LoadCorpus(noisy)) {
      const auto segs = Segmentize(doc, {5, seed});
      std::string hyp, ref;
      for (size_t k = 0; k < segs.size(); ++k) {
        hyp += segs[k].hyp_segment;
        ref += segs[k].ref_segment.value_or("");
        const bool last = k + 1 == segs.size();
        const size_t terminated = TerminatedSentences(segs[k].hyp_segment);
        const size_t total = SplitSentences(segs[k].hyp_segment).size();
        // Only the final segment may end in an unterminated fragment.
        const bool ok = terminated <= 5 && total >= 1 &&
                        (last ? total <= terminated + 1 : total == terminated);
        if (!ok) {
          ++violations;
          if (first_violation.empty()) {
            first_violation = doc.id + " segment " + std::to_string(k);
          }
        }
        ++segments;
      }
      if (hyp != doc.hyp_text || ref != *doc.ref_text) {
        ++violations;
        if (first_violation.empty()) first_violation = doc.id + " concat";
      }
      ++docs_checked;
    }
  }
  std::string detail = std::to_string(docs_checked) + " docs, " +
                       std::to_string(segments) + " segments, " +
                       std::to_string(violations) + " violations";
  if (!first_violation.empty()) detail += " (first: " + first_violation + ")";
  return docs_checked >= 1000 && violations == 0 ? Pass(detail) : Fail(detail);
}

// ---- 4, 5, 10 --------------------------------------------------------

MetricReport DirectReport(const std::vector<Document>& docs) {
  MetricReport sum;
  for (const Document& d : docs) {
    sum += CategorizedReport(*d.ref_text, d.hyp_text);
  }
  return sum;
}

bool SameCounts(const MetricReport& a, const MetricReport& b) {
  auto same = [](const CategoryStats& x, const CategoryStats& y) {
    const double ex = x.er(), ey = y.er();
    return x.n_ref == y.n_ref && x.s == y.s && x.d == y.d && x.i == y.i &&
           std::memcmp(&ex, &ey, sizeof ex) == 0;
  };
  for (Category c : kAllCategories) {
    if (!same(a.at(c), b.at(c))) return false;
  }
  return same(a.overall, b.overall);
}

Outcome IdentityEndToEnd(const testing::TempDir& dir, const EngineConfig& cfg,
                         const std::string& tag) {
  const auto docs = testing::SyntheticCorpus(100, 404);
  const std::string corpus = dir.File(tag + "_identity.jsonl");
  SaveCorpus(docs, corpus);
  IdentityClient client;
  BatchOptions options;
  options.parallelism = 4;
  const CorrectSummary s =
      Correct(corpus, dir.File(tag + "_identity_out"), client, cfg, options);
  const auto out = LoadCorpus(dir.File(tag + "_identity_out/corrected.jsonl"));
  size_t differing = 0;
  for (size_t k = 0; k < docs.size(); ++k) {
    if (k >= out.size() || out[k].hyp_text != docs[k].hyp_text) ++differing;
  }
  const MetricReport direct = DirectReport(docs);
  const bool report_ok = s.report && SameCounts(*s.report, direct);
  const std::string detail =
      std::to_string(docs.size()) + " docs, " + std::to_string(differing) +
      " differing outputs, Overall ER " +
      Fmt("%.4f%% vs direct %.4f%%", s.report ? s.report->overall.er() * 100 : NAN,
          direct.overall.er() * 100);
  return s.failed == 0 && differing == 0 && report_ok ? Pass(detail)
                                                      : Fail(detail);
}

// Every sentence of every reference gets one substituted character, so all
// segments have a positive error rate.
std::vector<Document> ErroneousCorpus(size_t n, uint64_t seed) {
  SeededRng rng(seed);
  std::vector<Document> docs;
  for (size_t k = 0; k < n; ++k) {
    Document doc;
    doc.id = "e" + std::to_string(k);
    std::string ref, hyp;
    const size_t sentences = 1 + rng.Below(12);
    for (size_t i = 0; i < sentences; ++i) {
      const std::string s = testing::CleanText(rng, 1);
      std::vector<size_t> han;
      const auto cps = DecodeUtf8(s);
      for (size_t c = 0; c < cps.size(); ++c) {
        if (IsCjkIdeograph(cps[c].value)) han.push_back(c);
      }
      const size_t pick = han[rng.Below(han.size())];
      std::string noisy;
      for (size_t c = 0; c < cps.size(); ++c) {
        if (c == pick) {
          noisy += "錯";
        } else {
          noisy.append(s, cps[c].byte_offset, cps[c].byte_length);
        }
      }
      ref += s;
      hyp += noisy;
    }
    doc.ref_text = ref;
    doc.hyp_text = hyp;
    docs.push_back(std::move(doc));
  }
  return docs;
}

Outcome OracleLimits(const EngineConfig& base) {
  OracleClient oracle;
  BatchOptions options;

  EngineConfig open = base;
  open.threshold = 10.0;
  const auto docs = testing::SyntheticCorpus(100, 505);
  const BatchResult all = RunBatch(docs, oracle, open, options);
  const double open_er = all.report.overall.er();

  const auto bad = ErroneousCorpus(60, 606);
  size_t clean_segments = 0;
  for (const Document& d : bad) {
    for (const SegmentPair& p : Segmentize(d, options.segmentation)) {
      if (!(ErrorRate(*p.ref_segment, p.hyp_segment) > 0)) ++clean_segments;
    }
  }
  EngineConfig closed = base;
  closed.threshold = 1e-9;
  const BatchResult none = RunBatch(bad, oracle, closed, options);
  size_t differing = 0;
  for (size_t k = 0; k < bad.size(); ++k) {
    if (!none.sessions[k] || none.sessions[k]->corrected_text != bad[k].hyp_text) {
      ++differing;
    }
  }
  const bool er_equal = SameCounts(none.report, none.baseline);
  const std::string detail =
      Fmt("threshold 10: Overall ER %.6f; ", open_er) +
      "threshold 1e-9: " + std::to_string(differing) + " of " +
      std::to_string(bad.size()) + " docs differ from hyp, " +
      std::to_string(clean_segments) + " error-free segments, ER " +
      (er_equal ? "==" : "!=") + " baseline";
  return all.failures.empty() && none.failures.empty() && open_er == 0.0 &&
                 clean_segments == 0 && differing == 0 && er_equal
             ? Pass(detail)
             : Fail(detail);
}

// ---- 6 ---------------------------------------------------------------

Outcome ThresholdMonotonicity(const testing::TempDir& dir) {
  const auto docs = testing::SyntheticCorpus(60, 707);
  const std::string record = dir.File("transcript.jsonl");
  {
    auto model = std::make_shared<testing::PerturbingClient>();
    RecordingClient recorder(model, record);
    RunBatch(docs, recorder, EngineConfig(), {});
  }
  auto replay = ReplayClient::Load(record);
  std::set<std::pair<size_t, size_t>> prev;
  double prev_ratio = -1;
  bool subset = true, nondecreasing = true;
  std::string ratios;
  for (double t : {0.2, 0.3, 0.4, 0.5}) {
    EngineConfig cfg;
    cfg.threshold = t;
    const BatchResult b = RunBatch(docs, *replay, cfg, {});
    if (!b.failures.empty()) return Fail("replay failed: " + b.failures[0].message);
    std::set<std::pair<size_t, size_t>> accepted;
    for (size_t k = 0; k < docs.size(); ++k) {
      for (const auto& d : b.sessions[k]->decisions) {
        if (d.accepted) accepted.emplace(k, d.index);
      }
    }
    subset &= std::includes(accepted.begin(), accepted.end(), prev.begin(),
                            prev.end());
    nondecreasing &= b.correction_ratio() >= prev_ratio;
    ratios += Fmt(" %.2f:", t) + Fmt("%.3f", b.correction_ratio());
    prev = std::move(accepted);
    prev_ratio = b.correction_ratio();
  }
  const std::string detail = "correction ratio" + ratios;
  return subset && nondecreasing ? Pass(detail) : Fail(detail);
}

// ---- 7 ---------------------------------------------------------------

Outcome TokenBudgeting() {
  std::string six_k, article;
  for (int i = 0; i < 6000; ++i) six_k += "字";
  for (int i = 0; i < 80697; ++i) article += "文";
  const int64_t a = EstimateTokens(six_k);
  const int64_t b = EstimateSessionTokens(std::string_view(article));
  const std::string detail = "6000 chars -> " + std::to_string(a) +
                             ", 80697-char session -> " + std::to_string(b);
  return a == 4020 && b >= 155000 && b <= 170000 ? Pass(detail) : Fail(detail);
}

// ---- 8 ---------------------------------------------------------------

Outcome ConversationShape(const testing::TempDir& dir) {
  const auto docs = testing::SyntheticCorpus(300, 808);
  const std::string corpus = dir.File("shape.jsonl");
  const std::string chats = dir.File("shape_chats.jsonl");
  SaveCorpus(docs, corpus);
  PrepareOptions options;
  options.export_options.segmentation.seed = 8;
  options.check_round_trip = true;
  Prepare(corpus, chats, options);

  std::ifstream in(chats);
  std::string line;
  size_t k = 0, bad = 0;
  while (std::getline(in, line)) {
    if (k >= docs.size()) {
      ++bad;
      break;
    }
    const auto wire = nlohmann::json::parse(line);
    const auto& msgs = wire.at("messages");
    const size_t n_segments =
        Segmentize(docs[k], options.export_options.segmentation).size();
    bool ok = msgs.size() == 2 * n_segments;
    for (size_t i = 0; ok && i < msgs.size(); ++i) {
      ok = msgs[i].at("role") == (i % 2 == 0 ? "user" : "assistant") &&
           !msgs[i].at("content").get<std::string>().empty();
    }
    ok = ok && msgs[0].at("content").get<std::string>().find(
                   docs[k].hyp_text) != std::string::npos;
    bad += !ok;
    ++k;
  }
  const std::string detail = std::to_string(k) + " conversations, " +
                             std::to_string(bad) + " malformed";
  return k == docs.size() && bad == 0 ? Pass(detail) : Fail(detail);
}

// ---- 9 ---------------------------------------------------------------

Outcome DatasetBaseline() {
  const char* path = std::getenv("COC_CHFT_HOMOGENEOUS");
  if (path == nullptr || *path == '\0') {
    return Skip("set COC_CHFT_HOMOGENEOUS to a corpus JSONL of the test set");
  }
  const MetricReport r = Evaluate(path, std::nullopt);
  const double er = r.overall.er() * 100;
  const std::string detail = Fmt("Overall ER %.2f%% (target 12.61 +/- 1.5)", er);
  if (std::abs(er - 12.61) <= 1.5) return Pass(detail);
  // Category conventions of the published numbers are not known, so a
  // deviation is reported without failing the suite.
  return Skip("deviation: " + detail);
}

// ---- 10 --------------------------------------------------------------

Outcome PinyinPlumbing(const testing::TempDir& dir) {
  std::map<std::string, std::string> file;
  {
    std::ifstream in(COC_TEST_PINYIN_TABLE);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      const size_t tab = line.find('\t');
      file.emplace(line.substr(0, tab), line.substr(tab + 1));
    }
  }
  const std::string expected = file.at("你") + " " + file.at("好") + " 。";
  auto table = std::make_shared<const PinyinTable>(
      PinyinTable::Load(COC_TEST_PINYIN_TABLE));
  Document doc{"nh", std::nullopt, "你好。", std::nullopt};
  const auto segs = Segmentize(doc, {});
  const Conversation conv = BuildConversation(
      doc.hyp_text, segs, GuidanceMode::kPinyin, kDefaultInstruction,
      table.get());
  const std::string& first = conv.messages[0].content;
  const std::string guidance = first.substr(first.rfind("\n\n") + 2);

  EngineConfig cfg;
  cfg.guidance = GuidanceMode::kPinyin;
  cfg.pinyin = table;
  const Outcome identity = IdentityEndToEnd(dir, cfg, "pinyin");
  const Outcome oracle = OracleLimits(cfg);
  const bool ok = guidance == expected && expected == "ni3 hao3 。" &&
                  identity.status == Status::kPass &&
                  oracle.status == Status::kPass;
  const std::string detail = "guidance \"" + guidance + "\"; identity: " +
                             identity.detail + "; oracle: " + oracle.detail;
  return ok ? Pass(detail) : Fail(detail);
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

int Main() {
  testing::TempDir dir;
  const std::vector<Criterion> criteria = {
      {1, "alignment oracle equivalence", AlignmentOracle},
      {2, "ERR arithmetic", ErrArithmetic},
      {3, "segmentation round trip", [&] { return SegmentationRoundTrip(dir); }},
      {4, "identity end-to-end",
       [&] { return IdentityEndToEnd(dir, EngineConfig(), "hyp"); }},
      {5, "oracle limits", [] { return OracleLimits(EngineConfig()); }},
      {6, "threshold monotonicity", [&] { return ThresholdMonotonicity(dir); }},
      {7, "token budgeting", TokenBudgeting},
      {8, "conversation shape", [&] { return ConversationShape(dir); }},
      {9, "dataset baseline (soft)", DatasetBaseline},
      {10, "pinyin guidance plumbing", [&] { return PinyinPlumbing(dir); }},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = Fail(std::string("exception: ") + e.what());
    }
    const char* tag = o.status == Status::kPass   ? "PASS"
                      : o.status == Status::kSkip ? "SKIP"
                                                  : "FAIL";
    std::printf("[%s] %2d %s: %s\n", tag, c.id, c.name, o.detail.c_str());
    failed += o.status == Status::kFail;
  }
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}

}  // namespace
}  // namespace coc

int main() { return coc::Main(); }
