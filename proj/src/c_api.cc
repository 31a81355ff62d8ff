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

#include "coc/coc.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <memory>
#include <new>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include "coc/align.h"
#include "coc/chat.h"
#include "coc/corpus.h"
#include "coc/engine.h"
#include "coc/errors.h"
#include "coc/http_client.h"
#include "coc/llm_client.h"
#include "coc/noise.h"
#include "coc/textproc.h"
#include "coc/workflow.h"

struct coc_pinyin_table {
  std::shared_ptr<const coc::PinyinTable> impl;
};

struct coc_config {
  coc::EngineConfig engine;
  coc::BatchOptions batch;
};

struct coc_client {
  std::shared_ptr<coc::LlmClient> impl;
};

namespace {

thread_local std::string g_last_error;

coc_status Fail(coc_status status, const char* what) {
  g_last_error = what;
  return status;
}

template <typename F>
coc_status Guard(F&& body) noexcept {
  try {
    g_last_error.clear();
    return body();
  } catch (const coc::ConfigError& e) {
    return Fail(COC_ERROR_INVALID_ARGUMENT, e.what());
  } catch (const coc::IoError& e) {
    return Fail(COC_ERROR_IO, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return Fail(COC_ERROR_IO, e.what());
  } catch (const coc::ParseError& e) {
    return Fail(COC_ERROR_PARSE, e.what());
  } catch (const nlohmann::json::exception& e) {
    return Fail(COC_ERROR_PARSE, e.what());
  } catch (const coc::ClientError& e) {
    return Fail(COC_ERROR_CLIENT, e.what());
  } catch (const coc::SessionError& e) {
    return Fail(COC_ERROR_CLIENT, e.what());
  } catch (const coc::ContextOverflowError& e) {
    return Fail(COC_ERROR_CONTEXT_OVERFLOW, e.what());
  } catch (const std::domain_error& e) {
    return Fail(COC_ERROR_DOMAIN, e.what());
  } catch (const std::invalid_argument& e) {
    return Fail(COC_ERROR_INVALID_ARGUMENT, e.what());
  } catch (const std::length_error& e) {
    return Fail(COC_ERROR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return Fail(COC_ERROR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(COC_ERROR_INTERNAL, e.what());
  } catch (...) {
    return Fail(COC_ERROR_INTERNAL, "unknown error");
  }
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size());
  out[s.size()] = '\0';
  return out;
}

void Require(const void* p, const char* name) {
  if (p == nullptr) throw coc::ConfigError(std::string(name) + " is NULL");
}

void Emit(const nlohmann::json& j, char** out) {
  if (out != nullptr) *out = CopyString(j.dump());
}

coc::Document ParseDocumentJson(const char* document_json) {
  Require(document_json, "document_json");
  const auto docs = [&] {
    std::string line(document_json);
    for (char& c : line) {
      if (c == '\n') c = ' ';
    }
    std::istringstream in(line);
    return coc::ParseCorpus(in, "document");
  }();
  if (docs.size() != 1) throw coc::ParseError("expected one document object");
  return docs.front();
}

nlohmann::json SummaryJson(const coc::TrainingExportSummary& s) {
  return {{"documents", s.documents},
          {"segments", s.segments},
          {"messages", s.messages}};
}

}  // namespace

extern "C" {

const char* coc_version(void) { return COC_VERSION; }

const char* coc_status_name(coc_status status) {
  switch (status) {
    case COC_OK:
      return "ok";
    case COC_ERROR_INVALID_ARGUMENT:
      return "invalid argument";
    case COC_ERROR_IO:
      return "i/o error";
    case COC_ERROR_PARSE:
      return "parse error";
    case COC_ERROR_CLIENT:
      return "client error";
    case COC_ERROR_CONTEXT_OVERFLOW:
      return "context overflow";
    case COC_ERROR_DOMAIN:
      return "domain error";
    case COC_ERROR_PARTIAL_FAILURE:
      return "partial failure";
    case COC_ERROR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* coc_last_error(void) { return g_last_error.c_str(); }

void coc_string_free(char* s) { std::free(s); }

coc_status coc_tokenize(const char* text, char** out_json) {
  return Guard([&] {
    Require(text, "text");
    Require(out_json, "out_json");
    nlohmann::json arr = nlohmann::json::array();
    for (const coc::Token& t : coc::Tokenize(text)) {
      arr.push_back({{"surface", t.surface},
                     {"category", coc::CategoryKey(t.category)},
                     {"char_offset", t.char_offset},
                     {"byte_offset", t.byte_offset}});
    }
    Emit(arr, out_json);
    return COC_OK;
  });
}

coc_status coc_split_sentences(const char* text, char** out_json) {
  return Guard([&] {
    Require(text, "text");
    Require(out_json, "out_json");
    nlohmann::json arr = nlohmann::json::array();
    for (const coc::Sentence& s : coc::SplitSentences(text)) {
      nlohmann::json terminal = nullptr;
      if (s.terminal) {
        std::string t;
        coc::AppendUtf8(*s.terminal, &t);
        terminal = t;
      }
      arr.push_back({{"text", s.text}, {"terminal", terminal}});
    }
    Emit(arr, out_json);
    return COC_OK;
  });
}

coc_status coc_pinyin_table_load(const char* path, coc_pinyin_table** out) {
  return Guard([&] {
    Require(path, "path");
    Require(out, "out");
    auto table = std::make_shared<const coc::PinyinTable>(
        coc::PinyinTable::Load(path));
    *out = new coc_pinyin_table{std::move(table)};
    return COC_OK;
  });
}

void coc_pinyin_table_free(coc_pinyin_table* table) { delete table; }

coc_status coc_to_pinyin(const coc_pinyin_table* table, const char* text,
                         char** out) {
  return Guard([&] {
    Require(table, "table");
    Require(text, "text");
    Require(out, "out");
    *out = CopyString(coc::ToPinyin(text, *table->impl));
    return COC_OK;
  });
}

coc_status coc_error_rate(const char* ref, const char* hyp, double* out) {
  return Guard([&] {
    Require(ref, "ref");
    Require(hyp, "hyp");
    Require(out, "out");
    *out = coc::ErrorRate(std::string_view(ref), std::string_view(hyp));
    return COC_OK;
  });
}

coc_status coc_categorized_report(const char* ref, const char* hyp,
                                  char** out_json) {
  return Guard([&] {
    Require(ref, "ref");
    Require(hyp, "hyp");
    Require(out_json, "out_json");
    Emit(coc::CategorizedReport(std::string_view(ref), std::string_view(hyp))
             .ToJson(),
         out_json);
    return COC_OK;
  });
}

coc_status coc_err(double er_corrected, double er_baseline, double* out) {
  return Guard([&] {
    Require(out, "out");
    *out = coc::RelativeErrorRateChange(er_corrected, er_baseline);
    return COC_OK;
  });
}

coc_status coc_format_report(const char* report_json, char** out) {
  return Guard([&] {
    Require(report_json, "report_json");
    Require(out, "out");
    const auto j = nlohmann::json::parse(report_json);
    *out = CopyString(coc::MetricReport::FromJson(j).FormatTable());
    return COC_OK;
  });
}

coc_status coc_estimate_tokens(const char* text, int64_t* out) {
  return Guard([&] {
    Require(text, "text");
    Require(out, "out");
    *out = coc::EstimateTokens(text);
    return COC_OK;
  });
}

coc_status coc_estimate_session_tokens(const char* hyp_text, int64_t* out) {
  return Guard([&] {
    Require(hyp_text, "hyp_text");
    Require(out, "out");
    *out = coc::EstimateSessionTokens(std::string_view(hyp_text));
    return COC_OK;
  });
}

coc_status coc_build_conversation(const char* document_json,
                                  const coc_config* config, char** out_json) {
  return Guard([&] {
    Require(config, "config");
    Require(out_json, "out_json");
    const coc::Document doc = ParseDocumentJson(document_json);
    config->engine.Validate();
    const auto segments = coc::Segmentize(doc, config->batch.segmentation);
    Emit(coc::ToWire(coc::BuildConversation(
             doc.hyp_text, segments, config->engine.guidance,
             config->engine.instruction, config->engine.pinyin.get())),
         out_json);
    return COC_OK;
  });
}

coc_status coc_config_create(coc_config** out) {
  return Guard([&] {
    Require(out, "out");
    *out = new coc_config();
    return COC_OK;
  });
}

void coc_config_free(coc_config* config) { delete config; }

#define COC_CONFIG_SETTER(name, type, ...)                   \
  coc_status coc_config_set_##name(coc_config* config, type value) { \
    return Guard([&] {                                        \
      Require(config, "config");                              \
      __VA_ARGS__;                                            \
      return COC_OK;                                          \
    });                                                       \
  }

COC_CONFIG_SETTER(threshold, double, {
  if (!(value > 0)) throw coc::ConfigError("threshold must be greater than 0");
  config->engine.threshold = value;
})
COC_CONFIG_SETTER(max_retries, int, {
  if (value < 0) throw coc::ConfigError("max_retries must be >= 0");
  config->engine.max_retries = value;
})
COC_CONFIG_SETTER(guidance, coc_guidance, {
  if (value != COC_GUIDANCE_HYP && value != COC_GUIDANCE_PINYIN) {
    throw coc::ConfigError("unknown guidance mode");
  }
  config->engine.guidance = value == COC_GUIDANCE_HYP
                                ? coc::GuidanceMode::kHypothesis
                                : coc::GuidanceMode::kPinyin;
})
COC_CONFIG_SETTER(pinyin_table, const coc_pinyin_table*, {
  config->engine.pinyin = value ? value->impl : nullptr;
})
COC_CONFIG_SETTER(context_limit, int64_t, {
  if (value <= 0) throw coc::ConfigError("context limit must be positive");
  config->engine.context_limit_tokens = value;
})
COC_CONFIG_SETTER(temperature, double, {
  if (!(value >= 0)) throw coc::ConfigError("temperature must be >= 0");
  config->engine.temperature = value;
})
COC_CONFIG_SETTER(retry_temperature, double, {
  if (!(value >= 0)) throw coc::ConfigError("temperature must be >= 0");
  config->engine.retry_temperature = value;
})
COC_CONFIG_SETTER(strict_context, int,
                  { config->engine.strict_context = value != 0; })
COC_CONFIG_SETTER(history, coc_history, {
  if (value != COC_HISTORY_EMITTED && value != COC_HISTORY_MODEL_OUTPUT) {
    throw coc::ConfigError("unknown history mode");
  }
  config->engine.history = value == COC_HISTORY_EMITTED
                               ? coc::HistoryMode::kEmitted
                               : coc::HistoryMode::kModelOutput;
})
COC_CONFIG_SETTER(transport_retries, int, {
  if (value < 0) throw coc::ConfigError("transport_retries must be >= 0");
  config->engine.transport_retries = value;
})
COC_CONFIG_SETTER(instruction, const char*, {
  Require(value, "instruction");
  if (*value == '\0') throw coc::ConfigError("instruction must not be empty");
  config->engine.instruction = value;
})
COC_CONFIG_SETTER(max_sentences, size_t, {
  if (value == 0) throw coc::ConfigError("max_sentences must be at least 1");
  config->batch.segmentation.max_sentences = value;
})
COC_CONFIG_SETTER(seed, uint64_t, { config->batch.segmentation.seed = value; })
COC_CONFIG_SETTER(parallelism, size_t, {
  if (value == 0) throw coc::ConfigError("parallelism must be at least 1");
  config->batch.parallelism = value;
})

#undef COC_CONFIG_SETTER

coc_status coc_config_to_json(const coc_config* config, char** out_json) {
  return Guard([&] {
    Require(config, "config");
    Require(out_json, "out_json");
    nlohmann::json j = config->engine.ToJson();
    j["max_sentences"] = config->batch.segmentation.max_sentences;
    j["seed"] = config->batch.segmentation.seed;
    j["parallelism"] = config->batch.parallelism;
    j["pinyin_table_loaded"] = static_cast<bool>(config->engine.pinyin);
    Emit(j, out_json);
    return COC_OK;
  });
}

coc_status coc_client_create_identity(coc_client** out) {
  return Guard([&] {
    Require(out, "out");
    *out = new coc_client{std::make_shared<coc::IdentityClient>()};
    return COC_OK;
  });
}

coc_status coc_client_create_oracle(coc_client** out) {
  return Guard([&] {
    Require(out, "out");
    *out = new coc_client{std::make_shared<coc::OracleClient>()};
    return COC_OK;
  });
}

coc_status coc_client_create_replay(const char* path, coc_client** out) {
  return Guard([&] {
    Require(path, "path");
    Require(out, "out");
    *out = new coc_client{
        std::shared_ptr<coc::LlmClient>(coc::ReplayClient::Load(path))};
    return COC_OK;
  });
}

coc_status coc_client_create_http(const char* endpoint, const char* model,
                                  const char* api_key, int timeout_seconds,
                                  coc_client** out) {
  return Guard([&] {
    Require(endpoint, "endpoint");
    Require(model, "model");
    Require(out, "out");
    if (timeout_seconds <= 0) throw coc::ConfigError("timeout must be positive");
    coc::HttpClientOptions options;
    options.endpoint = endpoint;
    options.model = model;
    options.api_key = api_key ? api_key : "";
    options.timeout_seconds = timeout_seconds;
    *out = new coc_client{std::make_shared<coc::HttpClient>(std::move(options))};
    return COC_OK;
  });
}

coc_status coc_client_create_recording(const coc_client* inner,
                                       const char* path, coc_client** out) {
  return Guard([&] {
    Require(inner, "inner");
    Require(path, "path");
    Require(out, "out");
    *out = new coc_client{
        std::make_shared<coc::RecordingClient>(inner->impl, path)};
    return COC_OK;
  });
}

void coc_client_free(coc_client* client) { delete client; }

coc_status coc_prepare(const char* corpus_path, const char* out_path,
                       const coc_config* config, int check_round_trip,
                       char** out_summary_json) {
  return Guard([&] {
    Require(corpus_path, "corpus_path");
    Require(out_path, "out_path");
    Require(config, "config");
    config->engine.Validate();
    coc::PrepareOptions options;
    options.export_options.segmentation = config->batch.segmentation;
    options.export_options.guidance = config->engine.guidance;
    options.export_options.pinyin = config->engine.pinyin.get();
    options.export_options.instruction = config->engine.instruction;
    options.check_round_trip = check_round_trip != 0;
    Emit(SummaryJson(coc::Prepare(corpus_path, out_path, options)),
         out_summary_json);
    return COC_OK;
  });
}

coc_status coc_simulate(const char* clean_path, const char* out_path,
                        const char* profile_json, uint64_t seed,
                        char** out_summary_json) {
  return Guard([&] {
    Require(clean_path, "clean_path");
    Require(out_path, "out_path");
    coc::NoiseProfile profile;
    if (profile_json != nullptr) {
      const auto j = nlohmann::json::parse(profile_json, nullptr, false);
      if (j.is_discarded()) throw coc::ConfigError("noise profile is not JSON");
      profile = coc::NoiseProfile::FromJson(j);
    }
    const coc::SimulateSummary s =
        coc::Simulate(clean_path, out_path, profile, seed);
    Emit({{"documents", s.documents},
          {"clean_tokens", s.clean_tokens},
          {"injected_edits", s.injected_edits}},
         out_summary_json);
    return COC_OK;
  });
}

coc_status coc_run_session(const char* document_json, coc_client* client,
                           const coc_config* config, char** out_session_json) {
  return Guard([&] {
    Require(client, "client");
    Require(config, "config");
    const coc::Document doc = ParseDocumentJson(document_json);
    const auto segments = coc::Segmentize(doc, config->batch.segmentation);
    const coc::SessionResult session =
        coc::RunSession(doc, segments, *client->impl, config->engine);
    Emit(session.ToJson(), out_session_json);
    return COC_OK;
  });
}

coc_status coc_correct(const char* corpus_path, const char* out_dir,
                       coc_client* client, const coc_config* config,
                       char** out_summary_json) {
  return Guard([&] {
    Require(corpus_path, "corpus_path");
    Require(out_dir, "out_dir");
    Require(client, "client");
    Require(config, "config");
    const coc::CorrectSummary s = coc::Correct(
        corpus_path, out_dir, *client->impl, config->engine, config->batch);
    nlohmann::json j = {{"documents", s.documents},
                        {"failed", s.failed},
                        {"segments", s.segments},
                        {"accepted", s.accepted},
                        {"correction_ratio",
                         s.segments == 0 ? 0.0
                                         : static_cast<double>(s.accepted) /
                                               static_cast<double>(s.segments)}};
    nlohmann::json failures = nlohmann::json::array();
    for (const auto& f : s.failures) {
      failures.push_back({{"doc_id", f.doc_id}, {"error", f.message}});
    }
    j["failures"] = std::move(failures);
    if (s.report) j["report"] = s.report->ToJson();
    Emit(j, out_summary_json);
    if (s.failed > 0) {
      return Fail(COC_ERROR_PARTIAL_FAILURE,
                  (std::to_string(s.failed) + " of " +
                   std::to_string(s.documents) + " documents failed")
                      .c_str());
    }
    return COC_OK;
  });
}

coc_status coc_sweep(const char* corpus_path, const char* csv_path,
                     coc_client* client, const coc_config* config,
                     const double* thresholds, size_t n_thresholds,
                     char** out_rows_json) {
  return Guard([&] {
    Require(corpus_path, "corpus_path");
    Require(csv_path, "csv_path");
    Require(client, "client");
    Require(config, "config");
    Require(thresholds, "thresholds");
    if (n_thresholds == 0) throw coc::ConfigError("no thresholds given");
    const auto rows = coc::Sweep(
        corpus_path, csv_path, *client->impl, config->engine, config->batch,
        std::span<const double>(thresholds, n_thresholds));
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
      arr.push_back({{"threshold", r.threshold},
                     {"er_mandarin", r.er_mandarin},
                     {"err_mandarin", r.err_mandarin
                                          ? nlohmann::json(*r.err_mandarin)
                                          : nlohmann::json(nullptr)},
                     {"correction_ratio", r.correction_ratio}});
    }
    Emit(arr, out_rows_json);
    return COC_OK;
  });
}

coc_status coc_evaluate(const char* hyp_path, const char* ref_path,
                        char** out_report_json) {
  return Guard([&] {
    Require(hyp_path, "hyp_path");
    Require(out_report_json, "out_report_json");
    std::optional<std::string> ref;
    if (ref_path != nullptr) ref = ref_path;
    Emit(coc::Evaluate(hyp_path, ref).ToJson(), out_report_json);
    return COC_OK;
  });
}

}  // extern "C"
