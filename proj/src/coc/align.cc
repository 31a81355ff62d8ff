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

#include "coc/align.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace coc {

namespace {

enum : uint8_t { kStepMatch, kStepSub, kStepDel, kStepIns };

template <typename Equal>
Alignment AlignImpl(size_t n, size_t m, Equal equal) {
  const uint64_t cells = uint64_t(n + 1) * uint64_t(m + 1);
  if (cells > kMaxAlignmentCells) {
    throw std::length_error("alignment of " + std::to_string(n) + " x " +
                            std::to_string(m) +
                            " tokens exceeds the DP size limit");
  }
  const size_t width = m + 1;
  std::vector<uint8_t> step(cells);
  std::vector<uint32_t> prev(width), cur(width);
  for (size_t j = 0; j <= m; ++j) {
    prev[j] = static_cast<uint32_t>(j);
    step[j] = kStepIns;
  }
  for (size_t i = 1; i <= n; ++i) {
    cur[0] = static_cast<uint32_t>(i);
    step[i * width] = kStepDel;
    for (size_t j = 1; j <= m; ++j) {
      const bool same = equal(i - 1, j - 1);
      const uint32_t diag = prev[j - 1] + (same ? 0 : 1);
      const uint32_t del = prev[j] + 1;
      const uint32_t ins = cur[j - 1] + 1;
      const uint32_t best = std::min({diag, del, ins});
      uint8_t s;
      if (diag == best) {
        s = same ? kStepMatch : kStepSub;
      } else if (del == best) {
        s = kStepDel;
      } else {
        s = kStepIns;
      }
      cur[j] = best;
      step[i * width + j] = s;
    }
    std::swap(prev, cur);
  }

  Alignment a;
  a.ops.reserve(std::max(n, m));
  size_t i = n, j = m;
  while (i > 0 || j > 0) {
    switch (step[i * width + j]) {
      case kStepMatch:
        --i, --j;
        a.ops.push_back({EditKind::kMatch, i, j});
        ++a.matches;
        break;
      case kStepSub:
        --i, --j;
        a.ops.push_back({EditKind::kSubstitute, i, j});
        ++a.substitutions;
        break;
      case kStepDel:
        --i;
        a.ops.push_back({EditKind::kDelete, i, std::nullopt});
        ++a.deletions;
        break;
      default:
        --j;
        a.ops.push_back({EditKind::kInsert, std::nullopt, j});
        ++a.insertions;
        break;
    }
  }
  std::reverse(a.ops.begin(), a.ops.end());
  return a;
}

double RateOf(uint64_t errors, uint64_t n) {
  if (n == 0) {
    return errors == 0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return static_cast<double>(errors) / static_cast<double>(n);
}

}  // namespace

Alignment Align(std::span<const Token> ref, std::span<const Token> hyp) {
  return AlignImpl(ref.size(), hyp.size(), [&](size_t i, size_t j) {
    return ref[i].surface == hyp[j].surface;
  });
}

Alignment Align(std::span<const std::string> ref,
                std::span<const std::string> hyp) {
  return AlignImpl(ref.size(), hyp.size(),
                   [&](size_t i, size_t j) { return ref[i] == hyp[j]; });
}

double ErrorRate(std::span<const Token> ref, std::span<const Token> hyp) {
  return RateOf(Align(ref, hyp).distance(), ref.size());
}

double ErrorRate(std::string_view ref_text, std::string_view hyp_text) {
  const auto ref = Tokenize(ref_text);
  const auto hyp = Tokenize(hyp_text);
  return ErrorRate(ref, hyp);
}

double CategoryStats::er() const { return RateOf(errors(), n_ref); }

CategoryStats& CategoryStats::operator+=(const CategoryStats& o) {
  n_ref += o.n_ref;
  s += o.s;
  d += o.d;
  i += o.i;
  err.reset();
  return *this;
}

MetricReport& MetricReport::operator+=(const MetricReport& o) {
  for (size_t k = 0; k < categories.size(); ++k) {
    categories[k] += o.categories[k];
  }
  overall += o.overall;
  return *this;
}

void MetricReport::AttachBaseline(const MetricReport& baseline) {
  auto attach = [](CategoryStats& mine, const CategoryStats& base) {
    const double b = base.er();
    const double c = mine.er();
    if (b > 0 && std::isfinite(b) && std::isfinite(c)) {
      mine.err = RelativeErrorRateChange(c, b);
    } else {
      mine.err.reset();
    }
  };
  for (size_t k = 0; k < categories.size(); ++k) {
    attach(categories[k], baseline.categories[k]);
  }
  attach(overall, baseline.overall);
}

bool MetricReport::IsAdditive() const {
  CategoryStats sum;
  for (const auto& c : categories) sum += c;
  return sum.n_ref == overall.n_ref && sum.s == overall.s &&
         sum.d == overall.d && sum.i == overall.i;
}

namespace {

nlohmann::json StatsToJson(const CategoryStats& c) {
  nlohmann::json j;
  const double er = c.er();
  j["er"] = std::isfinite(er) ? nlohmann::json(er) : nlohmann::json(nullptr);
  if (c.err) j["err"] = *c.err;
  j["n_ref"] = c.n_ref;
  j["s"] = c.s;
  j["d"] = c.d;
  j["i"] = c.i;
  return j;
}

CategoryStats StatsFromJson(const nlohmann::json& j) {
  CategoryStats c;
  c.n_ref = j.at("n_ref").get<uint64_t>();
  c.s = j.at("s").get<uint64_t>();
  c.d = j.at("d").get<uint64_t>();
  c.i = j.at("i").get<uint64_t>();
  if (j.contains("err") && j["err"].is_number()) c.err = j["err"].get<double>();
  return c;
}

std::string FormatPercent(double ratio) {
  if (!std::isfinite(ratio)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", ratio * 100.0);
  return buf;
}

std::string FormatSignedPercent(const std::optional<double>& ratio) {
  if (!ratio) return "-";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%+.2f", *ratio * 100.0);
  return buf;
}

}  // namespace

nlohmann::json MetricReport::ToJson() const {
  nlohmann::json j = nlohmann::json::object();
  for (Category c : kAllCategories) j[CategoryKey(c)] = StatsToJson(at(c));
  j["overall"] = StatsToJson(overall);
  return j;
}

MetricReport MetricReport::FromJson(const nlohmann::json& j) {
  MetricReport r;
  for (Category c : kAllCategories) r.at(c) = StatsFromJson(j.at(CategoryKey(c)));
  r.overall = StatsFromJson(j.at("overall"));
  return r;
}

std::string MetricReport::FormatTable() const {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-12s %10s %8s %8s %8s %9s %9s\n",
                "Category", "N_ref", "S", "D", "I", "ER%", "ERR%");
  out += line;
  auto row = [&](const char* label, const CategoryStats& c) {
    std::snprintf(line, sizeof(line),
                  "%-12s %10llu %8llu %8llu %8llu %9s %9s\n", label,
                  static_cast<unsigned long long>(c.n_ref),
                  static_cast<unsigned long long>(c.s),
                  static_cast<unsigned long long>(c.d),
                  static_cast<unsigned long long>(c.i),
                  FormatPercent(c.er()).c_str(),
                  FormatSignedPercent(c.err).c_str());
    out += line;
  };
  for (Category c : kAllCategories) row(CategoryLabel(c), at(c));
  row("Overall", overall);
  return out;
}

MetricReport CategorizedReport(std::span<const Token> ref,
                               std::span<const Token> hyp) {
  MetricReport report;
  for (const Token& t : ref) ++report.at(t.category).n_ref;
  report.overall.n_ref = ref.size();

  const Alignment a = Align(ref, hyp);
  for (const EditOp& op : a.ops) {
    switch (op.kind) {
      case EditKind::kMatch:
        break;
      case EditKind::kSubstitute:
        ++report.at(ref[*op.ref_index].category).s;
        ++report.overall.s;
        break;
      case EditKind::kDelete:
        ++report.at(ref[*op.ref_index].category).d;
        ++report.overall.d;
        break;
      case EditKind::kInsert:
        ++report.at(hyp[*op.hyp_index].category).i;
        ++report.overall.i;
        break;
    }
  }
  return report;
}

MetricReport CategorizedReport(std::string_view ref_text,
                               std::string_view hyp_text) {
  const auto ref = Tokenize(ref_text);
  const auto hyp = Tokenize(hyp_text);
  return CategorizedReport(ref, hyp);
}

double RelativeErrorRateChange(double er_corrected, double er_baseline) {
  if (!(er_baseline > 0) || !std::isfinite(er_baseline)) {
    throw std::domain_error("ERR is undefined for a zero baseline error rate");
  }
  return (er_corrected - er_baseline) / er_baseline;
}

size_t ProjectBoundary(const Alignment& alignment, size_t hyp_boundary) {
  const size_t hyp_size = alignment.hyp_size();
  if (hyp_boundary > hyp_size) {
    throw std::out_of_range("hypothesis boundary " +
                            std::to_string(hyp_boundary) + " > " +
                            std::to_string(hyp_size));
  }
  if (hyp_boundary == 0) return 0;
  if (hyp_boundary == hyp_size) return alignment.ref_size();
  size_t ref_consumed = 0;
  for (const EditOp& op : alignment.ops) {
    if (op.hyp_index && *op.hyp_index >= hyp_boundary) break;
    if (op.ref_index) ++ref_consumed;
  }
  return ref_consumed;
}

}  // namespace coc
