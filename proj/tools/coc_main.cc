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

// coc: command-line front end over the libcoc C interface.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "coc/coc.h"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

class StatusError : public std::runtime_error {
 public:
  StatusError(coc_status status, const std::string& what)
      : std::runtime_error(what), status_(status) {}
  coc_status status() const { return status_; }

 private:
  coc_status status_;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void Check(coc_status status) {
  if (status != COC_OK && status != COC_ERROR_PARTIAL_FAILURE) {
    throw StatusError(status, std::string(coc_status_name(status)) + ": " +
                                  coc_last_error());
  }
}

int ExitCodeFor(coc_status status) {
  switch (status) {
    case COC_OK:
      return kExitOk;
    case COC_ERROR_INVALID_ARGUMENT:
    case COC_ERROR_IO:
    case COC_ERROR_PARSE:
      return kExitConfig;
    default:
      return kExitFailure;
  }
}

std::string Take(char* s) {
  if (s == nullptr) return {};
  std::string out(s);
  coc_string_free(s);
  return out;
}

struct ConfigDeleter {
  void operator()(coc_config* p) const { coc_config_free(p); }
};
struct ClientDeleter {
  void operator()(coc_client* p) const { coc_client_free(p); }
};
struct TableDeleter {
  void operator()(coc_pinyin_table* p) const { coc_pinyin_table_free(p); }
};
using ConfigPtr = std::unique_ptr<coc_config, ConfigDeleter>;
using ClientPtr = std::unique_ptr<coc_client, ClientDeleter>;
using TablePtr = std::unique_ptr<coc_pinyin_table, TableDeleter>;

std::string Timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string PinyinTablePath(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("COC_PINYIN_TABLE"); env && *env) {
    return env;
  }
  return COC_DEFAULT_PINYIN_TABLE;
}

TablePtr LoadPinyin(const std::string& flag) {
  coc_pinyin_table* table = nullptr;
  Check(coc_pinyin_table_load(PinyinTablePath(flag).c_str(), &table));
  return TablePtr(table);
}

// Options shared by every command that segments documents.
struct SegmentFlags {
  size_t max_sentences = 5;
  uint64_t seed = 0;
  std::string guidance = "hyp";
  std::string pinyin_table;
  std::string instruction_file;

  void Register(CLI::App* cmd) {
    cmd->add_option("--max-sentences", max_sentences,
                    "Upper bound of sentences per segment")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", seed, "Segmentation seed")->capture_default_str();
    cmd->add_option("--guidance", guidance, "Per-turn guidance")
        ->capture_default_str()
        ->check(CLI::IsMember({"hyp", "pinyin"}));
    cmd->add_option("--pinyin-table", pinyin_table,
                    "char<TAB>syllable table (default: bundled table)");
    cmd->add_option("--instruction-file", instruction_file,
                    "Replace the default instruction with this file's text")
        ->check(CLI::ExistingFile);
  }

  // Returns the table so it outlives the config's use of it.
  TablePtr Apply(coc_config* config) const {
    Check(coc_config_set_max_sentences(config, max_sentences));
    Check(coc_config_set_seed(config, seed));
    TablePtr table;
    if (guidance == "pinyin") {
      table = LoadPinyin(pinyin_table);
      Check(coc_config_set_guidance(config, COC_GUIDANCE_PINYIN));
      Check(coc_config_set_pinyin_table(config, table.get()));
    }
    if (!instruction_file.empty()) {
      Check(coc_config_set_instruction(config,
                                       ReadFile(instruction_file).c_str()));
    }
    return table;
  }
};

struct PrepareFlags {
  std::string in, out;
  bool check = false;
  SegmentFlags seg;
};

struct SimulateFlags {
  std::string in, out, profile;
  uint64_t seed = 0;
  std::optional<double> sub_rate, del_rate, ins_rate, punct_drop_rate,
      number_verbalize_rate, lowercase_english, filler_rate;
};

struct CorrectFlags {
  std::string in, out;
  std::string endpoint, model, api_key, mock, replay, record;
  int timeout = 300;
  double threshold = 0.3;
  std::vector<double> sweep;
  int retries = 0;
  size_t parallel = 1;
  bool strict_context = false;
  std::string history = "emitted";
  int64_t context_limit = 256000;
  double temperature = 0;
  double retry_temperature = 0.7;
  int transport_retries = 2;
  SegmentFlags seg;
};

struct EvaluateFlags {
  std::string hyp, ref, out;
};

json ConfigSnapshot(const coc_config* config) {
  char* s = nullptr;
  Check(coc_config_to_json(config, &s));
  return json::parse(Take(s));
}

void WriteManifest(const std::string& path, const std::string& command,
                   const std::vector<std::string>& argv, json config,
                   json paths, uint64_t seed, const std::string& started) {
  json manifest = {{"command", command},
                   {"argv", argv},
                   {"cwd", fs::current_path().string()},
                   {"config", std::move(config)},
                   {"paths", std::move(paths)},
                   {"seed", seed},
                   {"started_at", started},
                   {"finished_at", Timestamp()},
                   {"version", coc_version()}};
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw StatusError(COC_ERROR_IO, "cannot write " + path);
  out << manifest.dump(2) << '\n';
}

std::string SidecarManifest(const std::string& out_path) {
  return out_path + ".manifest.json";
}

int RunPrepare(const PrepareFlags& f, const std::vector<std::string>& argv) {
  const std::string started = Timestamp();
  coc_config* raw = nullptr;
  Check(coc_config_create(&raw));
  ConfigPtr config(raw);
  TablePtr table = f.seg.Apply(config.get());
  char* summary = nullptr;
  Check(coc_prepare(f.in.c_str(), f.out.c_str(), config.get(), f.check ? 1 : 0,
                    &summary));
  const json s = json::parse(Take(summary));
  std::cerr << "prepared " << s["documents"] << " documents, "
            << s["segments"] << " segments, " << s["messages"]
            << " messages\n";
  WriteManifest(SidecarManifest(f.out), "prepare", argv,
                ConfigSnapshot(config.get()),
                {{"in", f.in}, {"out", f.out}}, f.seg.seed, started);
  return kExitOk;
}

int RunSimulate(const SimulateFlags& f, const std::vector<std::string>& argv) {
  const std::string started = Timestamp();
  json profile = json::object();
  if (!f.profile.empty()) {
    profile = json::parse(ReadFile(f.profile), nullptr, false);
    if (!profile.is_object()) {
      throw UsageError(f.profile + ": noise profile must be a JSON object");
    }
  }
  const std::pair<const char*, const std::optional<double>*> overrides[] = {
      {"sub_rate", &f.sub_rate},
      {"del_rate", &f.del_rate},
      {"ins_rate", &f.ins_rate},
      {"punct_drop_rate", &f.punct_drop_rate},
      {"number_verbalize_rate", &f.number_verbalize_rate},
      {"lowercase_english", &f.lowercase_english},
      {"filler_rate", &f.filler_rate}};
  for (const auto& [key, value] : overrides) {
    if (value->has_value()) profile[key] = **value;
  }
  char* summary = nullptr;
  Check(coc_simulate(f.in.c_str(), f.out.c_str(), profile.dump().c_str(),
                     f.seed, &summary));
  const json s = json::parse(Take(summary));
  std::cerr << "simulated " << s["documents"] << " documents, "
            << s["injected_edits"] << " edits over " << s["clean_tokens"]
            << " tokens\n";
  WriteManifest(SidecarManifest(f.out), "simulate", argv,
                {{"noise_profile", profile}},
                {{"in", f.in}, {"out", f.out}, {"profile", f.profile}}, f.seed,
                started);
  return kExitOk;
}

ClientPtr MakeClient(const CorrectFlags& f) {
  coc_client* raw = nullptr;
  if (!f.mock.empty()) {
    if (f.mock == "identity") {
      Check(coc_client_create_identity(&raw));
    } else if (f.mock == "oracle") {
      Check(coc_client_create_oracle(&raw));
    } else {
      if (f.replay.empty()) throw UsageError("--mock replay needs --replay");
      Check(coc_client_create_replay(f.replay.c_str(), &raw));
    }
  } else {
    if (f.endpoint.empty() || f.model.empty()) {
      throw UsageError(
          "either --mock or both --endpoint and --model are required");
    }
    Check(coc_client_create_http(f.endpoint.c_str(), f.model.c_str(),
                                 f.api_key.empty() ? nullptr
                                                   : f.api_key.c_str(),
                                 f.timeout, &raw));
  }
  ClientPtr client(raw);
  if (!f.record.empty()) {
    coc_client* recording = nullptr;
    Check(coc_client_create_recording(client.get(), f.record.c_str(),
                                      &recording));
    client.reset(recording);
  }
  return client;
}

int RunCorrect(const CorrectFlags& f, const std::vector<std::string>& argv) {
  const std::string started = Timestamp();
  coc_config* raw = nullptr;
  Check(coc_config_create(&raw));
  ConfigPtr config(raw);
  TablePtr table = f.seg.Apply(config.get());
  Check(coc_config_set_threshold(config.get(), f.threshold));
  Check(coc_config_set_max_retries(config.get(), f.retries));
  Check(coc_config_set_parallelism(config.get(), f.parallel));
  Check(coc_config_set_strict_context(config.get(), f.strict_context ? 1 : 0));
  Check(coc_config_set_history(config.get(), f.history == "model"
                                                 ? COC_HISTORY_MODEL_OUTPUT
                                                 : COC_HISTORY_EMITTED));
  Check(coc_config_set_context_limit(config.get(), f.context_limit));
  Check(coc_config_set_temperature(config.get(), f.temperature));
  Check(coc_config_set_retry_temperature(config.get(), f.retry_temperature));
  Check(coc_config_set_transport_retries(config.get(), f.transport_retries));
  ClientPtr client = MakeClient(f);

  fs::create_directories(f.out);
  json paths = {{"in", f.in}, {"out", f.out}};
  if (!f.replay.empty()) paths["replay"] = f.replay;
  if (!f.record.empty()) paths["record"] = f.record;

  if (!f.sweep.empty()) {
    const std::string csv = (fs::path(f.out) / "threshold_sweep.csv").string();
    char* rows = nullptr;
    Check(coc_sweep(f.in.c_str(), csv.c_str(), client.get(), config.get(),
                    f.sweep.data(), f.sweep.size(), &rows));
    Take(rows);
    paths["sweep_csv"] = csv;
    std::cerr << "wrote " << csv << '\n';
  }

  char* summary = nullptr;
  const coc_status status = coc_correct(f.in.c_str(), f.out.c_str(),
                                        client.get(), config.get(), &summary);
  const std::string partial_error = coc_last_error();
  Check(status);
  const json s = json::parse(Take(summary));
  if (s.contains("report")) {
    char* table_text = nullptr;
    Check(coc_format_report(s["report"].dump().c_str(), &table_text));
    std::cout << Take(table_text);
  }
  std::cerr << "corrected " << s["documents"] << " documents ("
            << s["failed"] << " failed), accepted " << s["accepted"] << " of "
            << s["segments"] << " segments\n";

  json snapshot = ConfigSnapshot(config.get());
  if (!f.mock.empty()) {
    snapshot["client"] = f.mock;
  } else {
    snapshot["client"] = "http";
    snapshot["endpoint"] = f.endpoint;
    snapshot["model"] = f.model;
  }
  if (!f.sweep.empty()) snapshot["sweep"] = f.sweep;
  WriteManifest((fs::path(f.out) / "manifest.json").string(), "correct", argv,
                std::move(snapshot), std::move(paths), f.seg.seed, started);
  if (status == COC_ERROR_PARTIAL_FAILURE) {
    std::cerr << "coc: " << partial_error << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

int RunEvaluate(const EvaluateFlags& f, const std::vector<std::string>& argv) {
  const std::string started = Timestamp();
  char* report = nullptr;
  Check(coc_evaluate(f.hyp.c_str(), f.ref.empty() ? nullptr : f.ref.c_str(),
                     &report));
  const std::string report_json = Take(report);
  char* table = nullptr;
  Check(coc_format_report(report_json.c_str(), &table));
  std::cout << Take(table);
  if (!f.out.empty()) {
    std::ofstream out(f.out, std::ios::binary | std::ios::trunc);
    if (!out) throw StatusError(COC_ERROR_IO, "cannot write " + f.out);
    out << json::parse(report_json).dump(2) << '\n';
    WriteManifest(SidecarManifest(f.out), "evaluate", argv, json::object(),
                  {{"hyp", f.hyp}, {"ref", f.ref}, {"out", f.out}}, 0,
                  started);
  }
  return kExitOk;
}

int RunCli(std::vector<std::string> args);

int RunRerun(const std::string& manifest_path) {
  const json manifest = json::parse(ReadFile(manifest_path), nullptr, false);
  if (!manifest.is_object() || !manifest.contains("argv")) {
    throw UsageError(manifest_path + ": not a run manifest");
  }
  auto argv = manifest["argv"].get<std::vector<std::string>>();
  if (!argv.empty() && argv.front() == "rerun") {
    throw UsageError(manifest_path + ": refusing to rerun a rerun");
  }
  if (manifest.contains("cwd")) fs::current_path(manifest["cwd"].get<std::string>());
  return RunCli(std::move(argv));
}

int RunCli(std::vector<std::string> args) {
  const std::vector<std::string> argv = args;
  CLI::App app{"Chained segment-by-segment ASR full-text correction", "coc"};
  app.set_version_flag("--version", std::string(coc_version()));
  app.set_config("--config", "", "TOML key = value file; flags override it");
  app.require_subcommand(1);

  PrepareFlags prep;
  CLI::App* prepare =
      app.add_subcommand("prepare", "Export training conversations");
  prepare->add_option("--in", prep.in, "Corpus JSONL")->required();
  prepare->add_option("--out", prep.out, "Conversation JSONL")->required();
  prepare->add_flag("--check", prep.check,
                    "Verify segment round trips while exporting");
  prep.seg.Register(prepare);

  SimulateFlags sim;
  CLI::App* simulate =
      app.add_subcommand("simulate", "Corrupt clean text into a corpus");
  simulate->add_option("--in", sim.in, "Clean-text JSONL")->required();
  simulate->add_option("--out", sim.out, "Corpus JSONL")->required();
  simulate->add_option("--profile", sim.profile, "Noise profile JSON")
      ->check(CLI::ExistingFile);
  simulate->add_option("--seed", sim.seed, "Noise seed")->capture_default_str();
  const auto rate = CLI::Range(0.0, 1.0);
  simulate->add_option("--sub-rate", sim.sub_rate)->check(rate);
  simulate->add_option("--del-rate", sim.del_rate)->check(rate);
  simulate->add_option("--ins-rate", sim.ins_rate)->check(rate);
  simulate->add_option("--punct-drop-rate", sim.punct_drop_rate)->check(rate);
  simulate->add_option("--number-verbalize-rate", sim.number_verbalize_rate)
      ->check(rate);
  simulate->add_option("--lowercase-english", sim.lowercase_english)
      ->check(rate);
  simulate->add_option("--filler-rate", sim.filler_rate)->check(rate);

  CorrectFlags cor;
  CLI::App* correct = app.add_subcommand("correct", "Correct a corpus");
  correct->add_option("--in", cor.in, "Corpus JSONL")->required();
  correct->add_option("--out", cor.out, "Results directory")->required();
  correct->add_option("--endpoint", cor.endpoint, "Chat-completion URL")
      ->envname("COC_ENDPOINT");
  correct->add_option("--model", cor.model, "Model name")->envname("COC_MODEL");
  correct->add_option("--timeout", cor.timeout, "HTTP timeout in seconds")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  correct->add_option("--mock", cor.mock, "Offline client")
      ->check(CLI::IsMember({"identity", "oracle", "replay"}));
  correct->add_option("--replay", cor.replay, "Record file for --mock replay")
      ->check(CLI::ExistingFile);
  correct->add_option("--record", cor.record,
                      "Append every completion to this record file");
  correct->add_option("--threshold", cor.threshold, "Correction threshold")
      ->capture_default_str();
  correct->add_option("--sweep", cor.sweep,
                      "Thresholds for threshold_sweep.csv")
      ->delimiter(',');
  correct->add_option("--retries", cor.retries,
                      "Re-queries after a rejected correction")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  correct->add_option("--parallel", cor.parallel, "Concurrent documents")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  correct->add_flag("--strict-context", cor.strict_context,
                    "Fail documents that may exceed the context limit");
  correct->add_option("--history", cor.history,
                      "Assistant turns kept in the chat history")
      ->capture_default_str()
      ->check(CLI::IsMember({"emitted", "model"}));
  correct->add_option("--context-limit", cor.context_limit,
                      "Context window in tokens")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  correct->add_option("--temperature", cor.temperature)->capture_default_str();
  correct->add_option("--retry-temperature", cor.retry_temperature)
      ->capture_default_str();
  correct->add_option("--transport-retries", cor.transport_retries)
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  cor.seg.Register(correct);
  if (const char* token = std::getenv("COC_API_TOKEN")) cor.api_key = token;

  EvaluateFlags ev;
  CLI::App* evaluate =
      app.add_subcommand("evaluate", "Score a corpus against references");
  evaluate->add_option("--hyp", ev.hyp, "Corpus JSONL to score")->required();
  evaluate->add_option("--ref", ev.ref,
                       "Reference corpus; default: refs inside --hyp");
  evaluate->add_option("--json", ev.out, "Write the report JSON here");

  double er_corrected = 0, er_baseline = 0;
  CLI::App* err = app.add_subcommand(
      "err", "Relative error-rate change of CORRECTED against BASELINE");
  err->add_option("corrected", er_corrected)->required();
  err->add_option("baseline", er_baseline)->required();

  std::string tokens_file, tokens_text;
  CLI::App* tokens =
      app.add_subcommand("tokens", "Estimate LLM tokens for a text");
  auto* tokens_in = tokens->add_option("--in", tokens_file, "UTF-8 text file")
                        ->check(CLI::ExistingFile);
  tokens->add_option("text", tokens_text)->excludes(tokens_in);

  std::string pinyin_text, pinyin_table;
  CLI::App* pinyin = app.add_subcommand("pinyin", "Tone-numbered pinyin");
  pinyin->add_option("text", pinyin_text)->required();
  pinyin->add_option("--pinyin-table", pinyin_table);

  std::string manifest_path;
  CLI::App* rerun =
      app.add_subcommand("rerun", "Repeat the run recorded in a manifest");
  rerun->add_option("manifest", manifest_path)
      ->required()
      ->check(CLI::ExistingFile);

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (app.got_subcommand(prepare)) return RunPrepare(prep, argv);
    if (app.got_subcommand(simulate)) return RunSimulate(sim, argv);
    if (app.got_subcommand(correct)) return RunCorrect(cor, argv);
    if (app.got_subcommand(evaluate)) return RunEvaluate(ev, argv);
    if (app.got_subcommand(err)) {
      double value = 0;
      Check(coc_err(er_corrected, er_baseline, &value));
      std::printf("%+.2f%%\n", value * 100.0);
      return kExitOk;
    }
    if (app.got_subcommand(tokens)) {
      const std::string text =
          tokens_file.empty() ? tokens_text : ReadFile(tokens_file);
      int64_t single = 0, session = 0;
      Check(coc_estimate_tokens(text.c_str(), &single));
      Check(coc_estimate_session_tokens(text.c_str(), &session));
      std::cout << "tokens " << single << "\nsession " << session << '\n';
      return kExitOk;
    }
    if (app.got_subcommand(pinyin)) {
      TablePtr table = LoadPinyin(pinyin_table);
      char* out = nullptr;
      Check(coc_to_pinyin(table.get(), pinyin_text.c_str(), &out));
      std::cout << Take(out) << '\n';
      return kExitOk;
    }
    if (app.got_subcommand(rerun)) return RunRerun(manifest_path);
  } catch (const StatusError& e) {
    std::cerr << "coc: " << e.what() << '\n';
    return ExitCodeFor(e.status());
  } catch (const UsageError& e) {
    std::cerr << "coc: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "coc: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
  return RunCli(std::vector<std::string>(argv + 1, argv + argc));
}
