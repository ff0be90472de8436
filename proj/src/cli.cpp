// Copyright 2026 The orgforge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "orgforge/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <map>
#include <set>

#include "orgforge/digest.hpp"
#include "orgforge/errors.hpp"
#include "orgforge/formats.hpp"
#include "orgforge/gateway.hpp"
#include "orgforge/idp.hpp"
#include "orgforge/simulation.hpp"

namespace fs = std::filesystem;

namespace orgforge {
namespace {

json read_json(const fs::path& path) {
  auto j = json::parse(read_text(path), nullptr, false);
  if (j.is_discarded()) throw FormatError(path.string() + ": not valid JSON");
  return j;
}

void require_dir(const fs::path& dir, const char* what) {
  if (!fs::is_directory(dir)) throw IoError(dir.string(), std::string(what) + " does not exist");
}

json file_digests(const fs::path& root, const std::vector<std::string>& names) {
  json files = json::object();
  for (const auto& n : names) files[n] = sha256_file(root / n);
  return files;
}

/// Digest entries that no longer match the files on disk.
std::vector<std::string> digest_mismatches(const fs::path& root, const json& files) {
  std::vector<std::string> bad;
  for (const auto& [name, digest] : files.items()) {
    const auto path = root / name;
    if (!fs::exists(path) || sha256_file(path) != digest.get<std::string>()) bad.push_back(name);
  }
  return bad;
}

LogFormat corpus_format(const json& manifest) {
  return parse_enum_or_throw<LogFormat>(manifest.at("config").at("log_format").get<std::string>());
}

/// The observable stream, read from JSONL when the corpus has it.
std::vector<ObservableRecord> load_observable(const fs::path& dir, const json& manifest) {
  const auto formats = expand_formats(corpus_format(manifest));
  const LogFormat pick =
      std::find(formats.begin(), formats.end(), LogFormat::jsonl) != formats.end()
          ? LogFormat::jsonl
          : formats.front();
  return read_observable(dir / observable_file_name(pick), pick);
}

std::vector<ObservableRecord> load_baseline(const fs::path& dir) {
  std::vector<ObservableRecord> out;
  for (const auto& line : read_lines(dir / kBaselineFile)) out.push_back(decode_jsonl(line));
  return out;
}

std::map<std::string, int> manifest_onsets(const json& manifest) {
  std::map<std::string, int> out;
  for (const auto& s : manifest.at("config").at("subjects"))
    out[s.at("name").get<std::string>()] = s.at("onset_day").get<int>();
  return out;
}

CheckResult check(std::string name, bool ok, std::string detail = {}) {
  return {std::move(name), ok, ok ? std::string{} : std::move(detail)};
}

std::string join_first(const std::vector<std::string>& items, std::size_t n = 5) {
  std::string out;
  for (std::size_t i = 0; i < items.size() && i < n; ++i) out += (i ? ", " : "") + items[i];
  if (items.size() > n) out += ", ... (" + std::to_string(items.size()) + " total)";
  return out;
}

}  // namespace

std::string timestamp_now() {
  std::time_t t = std::time(nullptr);
  if (const char* sde = std::getenv("SOURCE_DATE_EPOCH"); sde && *sde)
    t = static_cast<std::time_t>(std::strtoll(sde, nullptr, 10));
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void apply_override(SimConfig& config, const std::string& key, const std::string& value) {
  auto j = json::parse(config_to_json(config));
  if (!j.contains(key) || key == "subjects") throw ConfigError(key, "not an overridable config key");
  auto parsed = json::parse(value, nullptr, false);
  j[key] = parsed.is_discarded() ? json(value) : parsed;
  config = parse_config(j.dump());
}

GenerateResult cmd_generate(const SimConfig& config, const fs::path& out_dir) {
  validate(config);
  const Corpus corpus = run_simulation(config);
  fs::create_directories(out_dir);
  std::vector<std::string> names;
  for (const auto& p : write_observable(out_dir, corpus.observable(), config.log_format))
    names.push_back(p.filename().string());
  names.push_back(write_ground_truth(out_dir, corpus.ledger).filename().string());
  names.push_back(write_baseline_file(out_dir, corpus.baseline()).filename().string());

  int tp = 0;
  for (const auto& g : corpus.ledger) tp += g.true_positive ? 1 : 0;
  json m;
  m["tool"] = "orgforge";
  m["version"] = kProductVersion;
  m["seed"] = config.seed;
  m["config"] = json::parse(config_to_json(config));
  json pop = json::array();
  for (const auto& e : corpus.org.employees) pop.push_back(e.name);
  m["population"] = pop;
  m["counts"] = {{"records", corpus.ledger.size()},
                 {"true_positive", tp},
                 {"baseline", corpus.baseline().size()},
                 {"clean_period_end", corpus.clean_period_end()}};
  m["warnings"] = corpus.warnings;
  m["files"] = file_digests(out_dir, names);
  write_text(out_dir / kCorpusManifestFile, m.dump(2) + "\n");
  return {out_dir, corpus.warnings, m};
}

std::vector<CheckResult> cmd_verify(const fs::path& dir) {
  require_dir(dir, "corpus directory");
  std::vector<CheckResult> out;
  const auto manifest = read_json(dir / kCorpusManifestFile);

  const auto bad = digest_mismatches(dir, manifest.at("files"));
  out.push_back(check("digests", bad.empty(), "changed or missing: " + join_first(bad)));

  const auto ledger = read_ground_truth(dir / kGroundTruthFile);
  std::vector<ObservableRecord> stripped;
  for (const auto& g : ledger) stripped.push_back(g.record);

  // Label hygiene: no label key in any observable file, and each file decodes to the stripped ledger.
  std::vector<std::string> leaks, drift;
  for (auto f : expand_formats(corpus_format(manifest))) {
    const auto path = dir / observable_file_name(f);
    for (const auto& line : read_lines(path))
      for (auto key : kLabelKeys) {
        const std::string k(key);
        if (line.find("\"" + k + "\"") != std::string::npos || line.find(" " + k + "=") != std::string::npos ||
            line.find("\t" + k + "=") != std::string::npos || line.find("|" + k + "=") != std::string::npos)
          leaks.push_back(path.filename().string() + ":" + k);
      }
    if (read_observable(path, f) != stripped) drift.push_back(path.filename().string());
  }
  out.push_back(check("label_hygiene", leaks.empty(), "label keys found: " + join_first(leaks)));
  out.push_back(check("observable_matches_ledger", drift.empty(), "differs: " + join_first(drift)));

  const auto onsets = manifest_onsets(manifest);
  int first_onset = manifest.at("config").at("sim_days").get<int>() + 1;
  for (const auto& [_, d] : onsets) first_onset = std::min(first_onset, d);
  const auto baseline = load_baseline(dir);
  std::vector<ObservableRecord> expected_baseline;
  for (const auto& r : stripped)
    if (r.day < first_onset) expected_baseline.push_back(r);
  out.push_back(check("baseline_pre_onset", baseline == expected_baseline && !baseline.empty(),
                      "baseline file is empty or differs from the records before day " +
                          std::to_string(first_onset)));

  std::vector<std::string> labels;
  for (const auto& g : ledger) {
    const bool consistent = g.true_positive ? (g.threat_class && g.behavior)
                                            : (!g.threat_class && !g.behavior && !g.attacker_actor);
    if (!consistent) labels.push_back(g.record.record_id);
  }
  out.push_back(check("label_consistency", labels.empty(), "inconsistent labels: " + join_first(labels)));

  std::vector<std::string> corroborated;
  for (const auto& v : assert_no_corroboration(stripped))
    corroborated.push_back(v.auth_record_id + "<-" + v.activity_record_id);
  out.push_back(check("no_corroboration", corroborated.empty(), "corroborated: " + join_first(corroborated)));

  std::vector<std::string> vishing;
  for (const auto& g : ledger) {
    if (!g.attacker_actor || g.record.surface != Surface::idp) continue;
    const auto& a = g.record;
    const bool gap_ok = a.call_to_auth_gap_minutes && *a.call_to_auth_gap_minutes >= 5 &&
                        *a.call_to_auth_gap_minutes <= 25;
    const bool call_ok = gap_ok && std::any_of(stripped.begin(), stripped.end(), [&](const auto& c) {
      return c.event_type == "phone_call" && c.actor == *g.attacker_actor &&
             c.counterparty == a.actor && c.day == a.day &&
             a.minute - c.minute == *a.call_to_auth_gap_minutes;
    });
    if (a.preceded_by_call_record != true || !call_ok || a.actor == *g.attacker_actor)
      vishing.push_back(a.record_id);
  }
  out.push_back(check("vishing_cross_actor", vishing.empty(), "broken instances: " + join_first(vishing)));

  std::map<std::pair<std::string, int>, std::map<int, const ObservableRecord*>> trails;
  std::vector<std::string> trail_errors;
  for (const auto& r : stripped) {
    if (!r.hoarding_phase) continue;
    const int start = r.day - (*r.hoarding_phase - 1);
    trails[{r.actor, start}][*r.hoarding_phase] = &r;
  }
  for (const auto& [key, phases] : trails) {
    const bool complete = phases.size() == 3 && phases.count(1) && phases.count(2) && phases.count(3);
    const bool crumb = complete && phases.at(3)->hoarding_trail_start_day == key.second &&
                       phases.at(1)->day == key.second;
    if (!crumb) trail_errors.push_back(key.first + "@" + std::to_string(key.second));
  }
  out.push_back(check("hoarding_trails", trail_errors.empty(), "broken trails: " + join_first(trail_errors)));

  std::set<std::string> negligent;
  for (const auto& s : manifest.at("config").at("subjects"))
    if (s.at("class") == "negligent") negligent.insert(s.at("name").get<std::string>());
  std::vector<std::string> idp;
  for (const auto& r : stripped)
    if (negligent.count(r.actor) && r.surface == Surface::idp && (r.anomalous_ip || r.new_device))
      idp.push_back(r.record_id);
  out.push_back(check("negligent_no_idp_anomaly", idp.empty(), "anomalous sessions: " + join_first(idp)));
  return out;
}

fs::path cmd_evaluate(const fs::path& corpus_dir, const fs::path& run_dir,
                      const EvaluateOptions& options) {
  require_dir(corpus_dir, "corpus directory");
  const auto manifest_path = corpus_dir / kCorpusManifestFile;
  if (!fs::exists(manifest_path)) throw IoError(manifest_path.string(), "corpus manifest not found");
  const auto manifest = read_json(manifest_path);
  const auto prompts = PromptSet::load(options.prompt_variant, options.prompt_dir);

  // The agent is resolved before any stage runs so an unreachable gateway fails fast.
  std::unique_ptr<Agent> agent;
  if (options.agent == "rule") {
    agent = std::make_unique<RuleAgent>();
  } else if (options.agent.rfind("gateway:", 0) == 0 && options.agent.size() > 8) {
    std::string command = options.gateway_command;
    if (command.empty())
      if (const char* env = std::getenv(kGatewayEnv)) command = env;
    if (command.empty())
      throw AgentError("gateway agent requested but " + std::string(kGatewayEnv) + " is not set");
    auto client = std::make_shared<GatewayClient>(command, options.agent.substr(8));
    agent = std::make_unique<GatewayAgent>(client);
  } else {
    throw ConfigError("agent", "expected 'rule' or 'gateway:<model id>', got '" + options.agent + "'");
  }

  const auto observable = load_observable(corpus_dir, manifest);
  const auto baseline = load_baseline(corpus_dir);
  const int sim_days = manifest.at("config").at("sim_days").get<int>();

  const auto started = timestamp_now();
  const auto result = run_pipeline(baseline, observable, sim_days, *agent, prompts, options.pipeline);
  const auto finished = timestamp_now();

  json meta;
  meta["tool_version"] = kProductVersion;
  meta["agent"] = options.agent;
  meta["model_id"] = agent->model_id();
  meta["prompt_variant"] = prompts.variant();
  json ids = json::object();
  for (auto role : {AgentRole::baseline, AgentRole::triage, AgentRole::investigator})
    ids[std::string(to_string(role))] = prompts.prompt_id(role);
  meta["prompt_ids"] = ids;
  meta["triage_mode"] = to_string(options.pipeline.triage_mode);
  meta["window"] = {{"width", options.pipeline.window_width}, {"stride", options.pipeline.window_stride}};
  meta["temperature"] = options.pipeline.temperature;
  meta["max_tokens"] = options.pipeline.max_tokens;
  meta["corpus_digest"] = sha256_file(manifest_path);
  meta["started_at"] = started;
  meta["finished_at"] = finished;

  json run;
  run["run"] = meta;
  const json body = to_json(result);
  for (const auto& [k, v] : body.items()) run[k] = v;
  json classes = json::array();
  for (auto c : options.score_classes) classes.push_back(std::string(to_string(c)));
  run["scoring"] = {{"threat_classes", classes}, {"semantic_track", options.semantic_track}};

  fs::create_directories(run_dir / kRunCorpusDir);
  write_text(run_dir / kRunFile, run.dump(2) + "\n");
  for (auto name : {kGroundTruthFile, kCorpusManifestFile})
    fs::copy_file(corpus_dir / name, run_dir / kRunCorpusDir / name, fs::copy_options::overwrite_existing);
  const std::string corpus_prefix = std::string(kRunCorpusDir) + "/";
  json rm;
  rm["files"] = file_digests(run_dir, {std::string(kRunFile), corpus_prefix + std::string(kGroundTruthFile),
                                       corpus_prefix + std::string(kCorpusManifestFile)});
  write_text(run_dir / kRunManifestFile, rm.dump(2) + "\n");
  return run_dir;
}

std::string run_digest(const fs::path& run_dir) { return sha256_file(run_dir / kRunManifestFile); }

json cmd_score(const fs::path& run_dir) {
  require_dir(run_dir, "run directory");
  const auto manifest_path = run_dir / kRunManifestFile;
  if (!fs::exists(manifest_path)) throw IntegrityError(manifest_path.string() + ": run manifest missing");
  const auto manifest = read_json(manifest_path);
  if (!manifest.contains("files") || !manifest["files"].is_object())
    throw IntegrityError("run manifest lists no files");
  if (const auto bad = digest_mismatches(run_dir, manifest["files"]); !bad.empty())
    throw IntegrityError("refusing to score, digest mismatch: " + join_first(bad));

  const auto run = read_json(run_dir / kRunFile);
  std::vector<std::string> dropped;
  const auto result = result_from_json(run, &dropped);
  const auto corpus_manifest = read_json(run_dir / kRunCorpusDir / kCorpusManifestFile);
  const auto ledger = read_ground_truth(run_dir / kRunCorpusDir / kGroundTruthFile);
  const auto truth = build_ground_truth(ledger, manifest_onsets(corpus_manifest),
                                        corpus_manifest.value("population", std::vector<std::string>{}));

  ScoreOptions options;
  if (run.contains("scoring")) {
    const auto& s = run["scoring"];
    if (s.contains("threat_classes")) {
      options.scored_classes.clear();
      for (const auto& c : s["threat_classes"])
        options.scored_classes.insert(parse_enum_or_throw<ThreatClass>(c.get<std::string>()));
    }
    options.semantic_track = s.value("semantic_track", false);
  }
  const auto report = score_run(result, truth, options);

  json out;
  out["run_digest"] = run_digest(run_dir);
  const auto meta = run.value("run", json::object());
  out["model_id"] = meta.value("model_id", std::string{});
  out["prompt_variant"] = meta.value("prompt_variant", std::string{});
  out["agent"] = meta.value("agent", std::string{});
  out["dropped_verdicts"] = dropped;
  out["report"] = to_json(report);
  write_text(run_dir / kScoreFile, out.dump(2) + "\n");
  return out;
}

bool cmd_leaderboard_append(const fs::path& run_dir, const fs::path& board) {
  const auto score = cmd_score(run_dir);
  const auto digest = score.at("run_digest").get<std::string>();
  if (fs::exists(board)) {
    for (const auto& line : read_lines(board)) {
      auto row = json::parse(line, nullptr, false);
      if (!row.is_discarded() && row.value("run_digest", std::string{}) == digest) return false;
    }
  }
  const auto& r = score.at("report");
  json row;
  row["run_digest"] = digest;
  row["model_id"] = score["model_id"];
  row["prompt_variant"] = score["prompt_variant"];
  row["agent"] = score["agent"];
  row["triage_f1"] = r["triage"]["f1"];
  row["verdict_f1"] = r["verdict"]["f1"];
  row["baseline_fp_rate"] = r["baseline_fp_rate"];
  row["verdict_precision"] = r["verdict"]["precision"];
  row["verdict_recall"] = r["verdict"]["recall"];
  row["vishing_detected"] = r["vishing_detected"];
  row["host_trail_reconstructed"] = r["host_trail_reconstructed"];
  row["onset_sensitivity"] = r["onset_sensitivity"];
  row["report"] = r;
  std::string existing = fs::exists(board) ? read_text(board) : std::string{};
  if (!existing.empty() && existing.back() != '\n') existing.push_back('\n');
  if (board.has_parent_path()) fs::create_directories(board.parent_path());
  write_text(board, existing + row.dump() + "\n");
  return true;
}

}  // namespace orgforge
