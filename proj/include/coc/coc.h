/*
 * Copyright (c) 2026 The coc-asr Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface of libcoc, a toolkit for chained, segment-by-segment ASR
 * full-text error correction with chat LLMs.
 *
 * Conventions:
 *   - Every fallible call returns a coc_status. On failure a description is
 *     available from coc_last_error() (thread-local, valid until the next
 *     call on the same thread).
 *   - Strings are UTF-8. Strings returned through `char** out` parameters
 *     are owned by the caller and released with coc_string_free().
 *   - Handles are opaque. Each *_create / *_load has a matching *_free.
 *     Handles that reference others (a config using a pinyin table, a
 *     recording client wrapping another client) keep what they need
 *     alive, so handles may be freed in any order.
 *   - Structured results are JSON documents.
 */
#ifndef COC_COC_H_
#define COC_COC_H_

#include <stddef.h>
#include <stdint.h>

#if defined(COC_BUILDING_LIBRARY)
#define COC_API __attribute__((visibility("default")))
#else
#define COC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum coc_status {
  COC_OK = 0,
  COC_ERROR_INVALID_ARGUMENT = 1,
  COC_ERROR_IO = 2,
  COC_ERROR_PARSE = 3,
  COC_ERROR_CLIENT = 4,
  COC_ERROR_CONTEXT_OVERFLOW = 5,
  COC_ERROR_DOMAIN = 6,
  /* The run completed but some documents failed; outputs were written. */
  COC_ERROR_PARTIAL_FAILURE = 7,
  COC_ERROR_INTERNAL = 8
} coc_status;

typedef enum coc_guidance {
  COC_GUIDANCE_HYP = 0,
  COC_GUIDANCE_PINYIN = 1
} coc_guidance;

typedef enum coc_history {
  COC_HISTORY_EMITTED = 0,
  COC_HISTORY_MODEL_OUTPUT = 1
} coc_history;

typedef struct coc_pinyin_table coc_pinyin_table;
typedef struct coc_config coc_config;
typedef struct coc_client coc_client;

COC_API const char* coc_version(void);
COC_API const char* coc_status_name(coc_status status);
COC_API const char* coc_last_error(void);
COC_API void coc_string_free(char* s);

/* ---- text processing ------------------------------------------------- */

/* [{"surface", "category", "char_offset", "byte_offset"}, ...] */
COC_API coc_status coc_tokenize(const char* text, char** out_json);
/* [{"text", "terminal"|null}, ...] */
COC_API coc_status coc_split_sentences(const char* text, char** out_json);

COC_API coc_status coc_pinyin_table_load(const char* path,
                                         coc_pinyin_table** out);
COC_API void coc_pinyin_table_free(coc_pinyin_table* table);
COC_API coc_status coc_to_pinyin(const coc_pinyin_table* table,
                                 const char* text, char** out);

/* ---- metrics --------------------------------------------------------- */

/* (S+D+I)/N over tokens; +inf for an empty reference with a non-empty
 * hypothesis. */
COC_API coc_status coc_error_rate(const char* ref, const char* hyp,
                                  double* out);
COC_API coc_status coc_categorized_report(const char* ref, const char* hyp,
                                          char** out_json);
/* (corrected - baseline) / baseline; COC_ERROR_DOMAIN for a zero
 * baseline. */
COC_API coc_status coc_err(double er_corrected, double er_baseline,
                           double* out);
/* Human-readable table for a report produced by this library. */
COC_API coc_status coc_format_report(const char* report_json, char** out);

/* ---- conversations ---------------------------------------------------- */

COC_API coc_status coc_estimate_tokens(const char* text, int64_t* out);
COC_API coc_status coc_estimate_session_tokens(const char* hyp_text,
                                               int64_t* out);
/* Inference conversation (wire format, empty assistant slots) for one
 * corpus line {"id","hyp","ref"?,"segments"?}. */
COC_API coc_status coc_build_conversation(const char* document_json,
                                          const coc_config* config,
                                          char** out_json);

/* ---- configuration ---------------------------------------------------- */

COC_API coc_status coc_config_create(coc_config** out);
COC_API void coc_config_free(coc_config* config);
COC_API coc_status coc_config_set_threshold(coc_config* config, double value);
COC_API coc_status coc_config_set_max_retries(coc_config* config, int value);
COC_API coc_status coc_config_set_guidance(coc_config* config,
                                           coc_guidance value);
/* The table is shared; it may be freed afterwards. NULL clears it. */
COC_API coc_status coc_config_set_pinyin_table(coc_config* config,
                                               const coc_pinyin_table* table);
COC_API coc_status coc_config_set_context_limit(coc_config* config,
                                                int64_t tokens);
COC_API coc_status coc_config_set_temperature(coc_config* config,
                                              double value);
COC_API coc_status coc_config_set_retry_temperature(coc_config* config,
                                                    double value);
COC_API coc_status coc_config_set_strict_context(coc_config* config,
                                                 int strict);
COC_API coc_status coc_config_set_history(coc_config* config,
                                          coc_history value);
COC_API coc_status coc_config_set_transport_retries(coc_config* config,
                                                    int value);
COC_API coc_status coc_config_set_instruction(coc_config* config,
                                              const char* instruction);
COC_API coc_status coc_config_set_max_sentences(coc_config* config,
                                                size_t value);
COC_API coc_status coc_config_set_seed(coc_config* config, uint64_t seed);
COC_API coc_status coc_config_set_parallelism(coc_config* config,
                                              size_t workers);
COC_API coc_status coc_config_to_json(const coc_config* config,
                                      char** out_json);

/* ---- chat backends ---------------------------------------------------- */

COC_API coc_status coc_client_create_identity(coc_client** out);
COC_API coc_status coc_client_create_oracle(coc_client** out);
COC_API coc_status coc_client_create_replay(const char* path,
                                            coc_client** out);
/* POSTs {"model","messages","temperature"} to an OpenAI-compatible
 * endpoint. api_key may be NULL. */
COC_API coc_status coc_client_create_http(const char* endpoint,
                                          const char* model,
                                          const char* api_key,
                                          int timeout_seconds,
                                          coc_client** out);
/* Appends every completion of `inner` to a JSONL record file usable with
 * coc_client_create_replay. */
COC_API coc_status coc_client_create_recording(const coc_client* inner,
                                               const char* path,
                                               coc_client** out);
COC_API void coc_client_free(coc_client* client);

/* ---- pipelines -------------------------------------------------------- */

/* Corpus JSONL -> training conversations JSONL. Summary:
 * {"documents","segments","messages"}. */
COC_API coc_status coc_prepare(const char* corpus_path, const char* out_path,
                               const coc_config* config, int check_round_trip,
                               char** out_summary_json);
/* Clean-text JSONL -> noisy corpus JSONL. profile_json holds NoiseProfile
 * fields (sub_rate, del_rate, ins_rate, punct_drop_rate,
 * number_verbalize_rate, lowercase_english, filler_rate); NULL means no
 * noise. */
COC_API coc_status coc_simulate(const char* clean_path, const char* out_path,
                                const char* profile_json, uint64_t seed,
                                char** out_summary_json);
/* Corrects one document; returns the session as JSON. */
COC_API coc_status coc_run_session(const char* document_json,
                                   coc_client* client,
                                   const coc_config* config,
                                   char** out_session_json);
/* Corrects a corpus into out_dir (corrected.jsonl, sessions.jsonl,
 * failures.jsonl, report.json, report.txt). */
COC_API coc_status coc_correct(const char* corpus_path, const char* out_dir,
                               coc_client* client, const coc_config* config,
                               char** out_summary_json);
/* One batch per threshold; writes the sweep CSV. */
COC_API coc_status coc_sweep(const char* corpus_path, const char* csv_path,
                             coc_client* client, const coc_config* config,
                             const double* thresholds, size_t n_thresholds,
                             char** out_rows_json);
/* ref_path may be NULL, in which case hyp_path must carry "ref" fields. */
COC_API coc_status coc_evaluate(const char* hyp_path, const char* ref_path,
                                char** out_report_json);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* COC_COC_H_ */
