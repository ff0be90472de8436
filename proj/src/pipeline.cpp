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

#include "orgforge/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "orgforge/errors.hpp"
#include "orgforge/formats.hpp"

namespace orgforge {
namespace {

json record_json(const ObservableRecord& r) { return json::parse(encode_jsonl(r)); }

json records_json(const std::vector<const ObservableRecord*>& rs) {
  json out = json::array();
  for (const auto* r : rs) out.push_back(record_json(*r));
  return out;
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::optional<json> try_parse(std::string_view s) {
  auto j = json::parse(s, nullptr, false);
  if (j.is_discarded() || !(j.is_array() || j.is_object())) return std::nullopt;
  return j;
}

/// Text inside the first ``` fence pair, minus the info string.
std::optional<std::string> fenced_body(const std::string& text) {
  auto open = text.find("```");
  if (open == std::string::npos) return std::nullopt;
  auto body_start = text.find('\n', open);
  if (body_start == std::string::npos) return std::nullopt;
  auto close = text.find("```", body_start);
  if (close == std::string::npos) return text.substr(body_start + 1);
  return text.substr(body_start + 1, close - body_start - 1);
}

/// End (exclusive) of the balanced structure opening at `start`, if any.
std::optional<std::size_t> balanced_end(const std::string& s, std::size_t start) {
  std::vector<char> stack;
  bool in_string = false;
  for (std::size_t i = start; i < s.size(); ++i) {
    char c = s[i];
    if (in_string) {
      if (c == '\\') ++i;
      else if (c == '"') in_string = false;
      continue;
    }
    if (c == '"') in_string = true;
    else if (c == '[' || c == '{') stack.push_back(c == '[' ? ']' : '}');
    else if (c == ']' || c == '}') {
      if (stack.empty() || stack.back() != c) return std::nullopt;
      stack.pop_back();
      if (stack.empty()) return i + 1;
    }
  }
  return std::nullopt;
}

const std::map<AgentRole, std::string>& official_prompts() {
  static const std::map<AgentRole, std::string> m{
      {AgentRole::baseline,
       "You are reviewing telemetry from a clean observation period. List any employees whose "
       "activity is statistically anomalous relative to their peers. Respond with a JSON array "
       "of objects with keys employee and reason. Respond with [] if nobody stands out."},
      {AgentRole::triage,
       "You are triaging one window of security telemetry. Identify employees whose activity in "
       "this window shows anomalies. Respond with a JSON array of objects with keys employee and "
       "anomalies (a list of short strings)."},
      {AgentRole::investigator,
       "You are investigating one escalated employee. Using the full timeline, Slack history, "
       "cross-actor records, and the behavior definitions, decide whether the employee is "
       "innocent, suspicious, or a likely_threat. Respond with one JSON object with keys "
       "employee, verdict, behaviors, evidence (list of {record_id, note}), "
       "recommended_action, confidence (low|medium|high). Use behavior names from the "
       "definitions where they apply."},
  };
  return m;
}

}  // namespace

std::vector<Window> slice_windows(int sim_days, int width, int stride) {
  if (width < 1 || stride < 1) throw std::invalid_argument("slice_windows: width and stride must be >= 1");
  std::vector<Window> out;
  for (int s = 1; s <= sim_days; s += stride) {
    const int e = std::min(s + width - 1, sim_days);
    out.push_back({s, e});
    if (e == sim_days) break;
  }
  return out;
}

std::string_view to_string(Stage s) noexcept {
  switch (s) {
    case Stage::baseline: return "baseline";
    case Stage::triage: return "triage";
    case Stage::credential_scan: return "credential_scan";
  }
  return "?";
}
std::string_view to_string(AgentRole r) noexcept {
  switch (r) {
    case AgentRole::baseline: return "baseline";
    case AgentRole::triage: return "triage";
    case AgentRole::investigator: return "investigator";
  }
  return "?";
}
std::string_view to_string(VerdictClass v) noexcept {
  switch (v) {
    case VerdictClass::innocent: return "innocent";
    case VerdictClass::suspicious: return "suspicious";
    case VerdictClass::likely_threat: return "likely_threat";
  }
  return "?";
}
std::string_view to_string(Confidence c) noexcept {
  switch (c) {
    case Confidence::low: return "low";
    case Confidence::medium: return "medium";
    case Confidence::high: return "high";
  }
  return "?";
}
std::string_view to_string(TriageMode m) noexcept {
  return m == TriageMode::structural ? "structural" : "agent";
}

std::optional<VerdictClass> parse_verdict_class(std::string_view s) noexcept {
  for (auto v : {VerdictClass::innocent, VerdictClass::suspicious, VerdictClass::likely_threat})
    if (to_string(v) == s) return v;
  return std::nullopt;
}

std::optional<TriageMode> parse_triage_mode(std::string_view s) noexcept {
  if (s == "structural") return TriageMode::structural;
  if (s == "agent") return TriageMode::agent;
  return std::nullopt;
}

json to_json(const EscalationDecision& d) {
  json j;
  j["actor"] = d.actor;
  j["window"] = {{"start_day", d.window.start_day}, {"end_day", d.window.end_day}};
  j["signals"] = d.signals;
  j["stage"] = to_string(d.stage);
  j["record_ids"] = d.record_ids;
  return j;
}

EscalationDecision decision_from_json(const json& j) {
  try {
    EscalationDecision d;
    d.actor = j.at("actor").get<std::string>();
    d.window = {j.at("window").at("start_day").get<int>(), j.at("window").at("end_day").get<int>()};
    d.signals = j.value("signals", std::vector<std::string>{});
    const auto stage = j.at("stage").get<std::string>();
    if (stage == "baseline") d.stage = Stage::baseline;
    else if (stage == "triage") d.stage = Stage::triage;
    else if (stage == "credential_scan") d.stage = Stage::credential_scan;
    else throw FormatError("unknown stage '" + stage + "'");
    d.record_ids = j.value("record_ids", std::vector<std::string>{});
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed decision: ") + e.what());
  }
}

json to_json(const Verdict& v) {
  json j;
  j["employee"] = v.employee;
  j["verdict"] = to_string(v.verdict_class);
  j["behaviors"] = v.behaviors;
  json ev = json::array();
  for (const auto& e : v.evidence) ev.push_back({{"record_id", e.record_id}, {"note", e.note}});
  j["evidence"] = ev;
  j["recommended_action"] = v.recommended_action;
  j["confidence"] = to_string(v.confidence);
  return j;
}

Verdict verdict_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("verdict must be an object");
  auto str = [&](const char* key) -> std::optional<std::string> {
    if (j.contains(key) && j[key].is_string()) return j[key].get<std::string>();
    return std::nullopt;
  };
  Verdict v;
  auto who = str("employee");
  if (!who) who = str("actor");
  if (!who || who->empty()) throw FormatError("verdict lacks employee");
  v.employee = *who;
  auto cls = str("verdict");
  if (!cls) cls = str("verdict_class");
  if (!cls) throw FormatError("verdict lacks a verdict class");
  auto parsed = parse_verdict_class(*cls);
  if (!parsed) throw FormatError("unknown verdict class '" + *cls + "'");
  v.verdict_class = *parsed;
  if (j.contains("behaviors") && j["behaviors"].is_array())
    for (const auto& b : j["behaviors"])
      if (b.is_string()) v.behaviors.push_back(b.get<std::string>());
  if (j.contains("evidence") && j["evidence"].is_array()) {
    for (const auto& e : j["evidence"]) {
      if (e.is_string()) v.evidence.push_back({e.get<std::string>(), ""});
      else if (e.is_object() && e.contains("record_id") && e["record_id"].is_string())
        v.evidence.push_back({e["record_id"].get<std::string>(), e.value("note", std::string{})});
    }
  }
  v.recommended_action = str("recommended_action").value_or("");
  auto conf = str("confidence").value_or("low");
  v.confidence = conf == "high" ? Confidence::high : conf == "medium" ? Confidence::medium : Confidence::low;
  return v;
}

json extract_structured(const std::string& raw) {
  const std::string text = trim(raw);
  if (auto body = fenced_body(text)) {
    if (auto j = try_parse(trim(*body))) return *j;
  }
  if (auto j = try_parse(text)) return *j;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '[' && text[i] != '{') continue;
    if (auto end = balanced_end(text, i)) {
      if (auto j = try_parse(std::string_view(text).substr(i, *end - i))) return *j;
    }
  }
  throw ExtractionError("no JSON array or object found in model response", raw);
}

PromptSet PromptSet::load(const std::string& variant, const std::string& dir) {
  PromptSet p;
  p.variant_ = variant;
  for (auto role : {AgentRole::baseline, AgentRole::triage, AgentRole::investigator}) {
    if (!dir.empty()) {
      auto path = std::filesystem::path(dir) / (variant + "_" + std::string(to_string(role)) + ".txt");
      if (std::filesystem::exists(path)) {
        p.text_[role] = read_text(path);
        continue;
      }
    }
    if (variant != "official" && dir.empty())
      throw ConfigError("prompt_variant",
                        "variant '" + variant + "' needs a prompt directory with its files");
    p.text_[role] = official_prompts().at(role);
  }
  return p;
}

std::string PromptSet::prompt_id(AgentRole role) const {
  return variant_ + "/" + std::string(to_string(role));
}

const std::string& PromptSet::text(AgentRole role) const {
  auto it = text_.find(role);
  return it == text_.end() ? official_prompts().at(role) : it->second;
}

std::vector<std::string> record_signals(const ObservableRecord& r) {
  std::vector<std::string> out;
  if (r.outside_business_hours) out.emplace_back("outside_business_hours");
  if (r.anomalous_ip) out.emplace_back("anomalous_ip");
  if (r.new_device) out.emplace_back("new_device");
  if (r.is_external) out.emplace_back("is_external");
  if (r.surface == Surface::telemetry) {
    const bool clones = r.clone_count && *r.clone_count >= kCloneSignalThreshold;
    const bool foreign = r.resource_department && r.department && *r.resource_department != *r.department;
    if (clones || foreign) out.emplace_back("telemetry_anomaly");
  }
  return out;
}

json behavior_definitions() {
  json j;
  j["secret_in_commit"] = "A credential (cloud key, token, or password) committed in a pull request.";
  j["unusual_hours_access"] = "Activity or sign-ins well outside business hours from the employee's usual device and network.";
  j["excessive_repo_cloning"] = "Far more repository clones in a day than the employee's peers.";
  j["sentiment_drift"] = "A sustained change in message tone: hostile framing, or conspicuously flattened affect.";
  j["cross_dept_snooping"] = "Reading tickets or records that belong to another department.";
  j["data_exfil_email"] = "Mail carrying internal material to a personal address.";
  j["host_data_hoarding"] = "Staging files on a host: bulk copy, then archiving, then moving the archive off the machine.";
  j["social_engineering"] = "Manipulating a colleague: phishing, impersonation, pretext calls, or cultivated trust.";
  j["idp_anomaly"] = "Sign-ins from an unfamiliar device or network that the account holder cannot account for.";
  return j;
}

json investigation_context(const std::string& actor, const std::vector<ObservableRecord>& corpus,
                           const std::vector<EscalationDecision>& escalations) {
  std::vector<const ObservableRecord*> timeline, slack;
  std::set<const ObservableRecord*> cross;
  for (const auto& r : corpus) {
    if (r.actor != actor) continue;
    timeline.push_back(&r);
    if (r.surface == Surface::slack) slack.push_back(&r);
  }
  for (const auto* r : timeline) {
    if (r->preceded_by_call_record == true) {
      for (const auto& c : corpus)
        if (c.event_type == "phone_call" && c.counterparty == actor && c.day == r->day &&
            c.minute <= r->minute)
          cross.insert(&c);
    }
    if (r->event_type == "phone_call" && r->counterparty) {
      for (const auto& a : corpus)
        if (a.actor == *r->counterparty && a.preceded_by_call_record == true && a.day == r->day &&
            a.minute >= r->minute)
          cross.insert(&a);
    }
  }
  std::vector<const ObservableRecord*> cross_sorted(cross.begin(), cross.end());
  std::sort(cross_sorted.begin(), cross_sorted.end(),
            [](const auto* a, const auto* b) { return a->record_id < b->record_id; });

  json j;
  j["actor"] = actor;
  json esc = json::array();
  for (const auto& d : escalations)
    if (d.actor == actor) esc.push_back(to_json(d));
  j["escalations"] = esc;
  j["timeline"] = records_json(timeline);
  j["slack_history"] = records_json(slack);
  j["cross_actor_records"] = records_json(cross_sorted);
  j["behavior_definitions"] = behavior_definitions();
  return j;
}

std::vector<EscalationDecision> run_baseline_stage(const std::vector<ObservableRecord>& baseline,
                                                   Agent& agent, const PromptSet& prompts,
                                                   const PipelineOptions& options) {
  if (baseline.empty()) return {};
  int last_day = 1;
  std::vector<const ObservableRecord*> all;
  for (const auto& r : baseline) {
    all.push_back(&r);
    last_day = std::max(last_day, r.day);
  }
  AgentRequest req{AgentRole::baseline, prompts.prompt_id(AgentRole::baseline),
                   prompts.text(AgentRole::baseline), {{"records", records_json(all)}},
                   options.temperature, options.max_tokens};
  std::string raw;
  try {
    raw = agent.invoke(req);
  } catch (const std::exception& e) {
    throw AgentError(std::string("baseline stage: ") + e.what());
  }
  json parsed;
  try {
    parsed = extract_structured(raw);
  } catch (const ExtractionError& e) {
    throw AgentError(std::string("baseline stage: ") + e.what());
  }
  if (parsed.is_object()) parsed = json::array({parsed});
  std::set<std::string> known;
  for (const auto& r : baseline) known.insert(r.actor);
  std::map<std::string, EscalationDecision> flagged;
  for (const auto& item : parsed) {
    std::string who;
    if (item.is_string()) who = item.get<std::string>();
    else if (item.is_object() && item.contains("employee") && item["employee"].is_string())
      who = item["employee"].get<std::string>();
    if (who.empty() || !known.count(who)) continue;
    auto& d = flagged[who];
    d.actor = who;
    d.window = {1, last_day};
    d.stage = Stage::baseline;
    d.signals = {"agent_flagged"};
  }
  std::vector<EscalationDecision> out;
  for (auto& [_, d] : flagged) out.push_back(std::move(d));
  return out;
}

std::vector<EscalationDecision> run_triage_stage(const std::vector<Window>& windows,
                                                 const std::vector<ObservableRecord>& corpus,
                                                 Agent& agent, const PromptSet& prompts,
                                                 const PipelineOptions& options) {
  std::vector<EscalationDecision> out;
  for (const auto& w : windows) {
    std::map<std::string, std::map<std::string, std::vector<std::string>>> signals;  // actor -> kind -> ids
    std::map<std::string, std::vector<std::string>> fatal;
    std::vector<const ObservableRecord*> in_window;
    for (const auto& r : corpus) {
      if (r.day < w.start_day || r.day > w.end_day) continue;
      in_window.push_back(&r);
      for (auto& kind : record_signals(r)) signals[r.actor][kind].push_back(r.record_id);
      if (r.intrinsically_fatal) fatal[r.actor].push_back(r.record_id);
    }
    if (options.triage_mode == TriageMode::agent && !in_window.empty()) {
      AgentRequest req{AgentRole::triage, prompts.prompt_id(AgentRole::triage),
                       prompts.text(AgentRole::triage),
                       {{"window", {{"start_day", w.start_day}, {"end_day", w.end_day}}},
                        {"records", records_json(in_window)}},
                       options.temperature, options.max_tokens};
      const std::string id = "days " + std::to_string(w.start_day) + "-" + std::to_string(w.end_day);
      json parsed;
      try {
        parsed = extract_structured(agent.invoke(req));
      } catch (const std::exception& e) {
        throw AgentError("triage window " + id + ": " + e.what());
      }
      if (parsed.is_object()) parsed = json::array({parsed});
      for (const auto& item : parsed) {
        std::string who;
        if (item.is_string()) who = item.get<std::string>();
        else if (item.is_object() && item.contains("employee") && item["employee"].is_string())
          who = item["employee"].get<std::string>();
        if (who.empty()) continue;
        const bool present = std::any_of(in_window.begin(), in_window.end(),
                                         [&](const auto* r) { return r->actor == who; });
        if (present) signals[who]["agent_flagged"];
      }
    }
    for (const auto& [actor, kinds] : signals) {
      if (kinds.size() < 2) continue;
      EscalationDecision d{actor, w, {}, Stage::triage, {}};
      std::set<std::string> ids;
      for (const auto& [kind, rids] : kinds) {
        d.signals.push_back(kind);
        ids.insert(rids.begin(), rids.end());
      }
      d.record_ids.assign(ids.begin(), ids.end());
      out.push_back(std::move(d));
    }
    for (const auto& [actor, rids] : fatal)
      out.push_back({actor, w, {"intrinsically_fatal"}, Stage::credential_scan, rids});
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.actor != b.actor) return a.actor < b.actor;
    if (a.window.start_day != b.window.start_day) return a.window.start_day < b.window.start_day;
    return a.stage < b.stage;
  });
  return out;
}

std::vector<Verdict> run_correlation_stage(const std::vector<EscalationDecision>& escalations,
                                           const std::vector<ObservableRecord>& corpus,
                                           Agent& agent, const PromptSet& prompts,
                                           const PipelineOptions& options,
                                           std::vector<StageFailure>& failures) {
  std::set<std::string> actors;
  for (const auto& d : escalations)
    if (d.stage != Stage::baseline) actors.insert(d.actor);
  std::set<std::string> ids;
  for (const auto& r : corpus) ids.insert(r.record_id);

  std::vector<Verdict> out;
  for (const auto& actor : actors) {
    AgentRequest req{AgentRole::investigator, prompts.prompt_id(AgentRole::investigator),
                     prompts.text(AgentRole::investigator),
                     investigation_context(actor, corpus, escalations), options.temperature,
                     options.max_tokens};
    try {
      json parsed = extract_structured(agent.invoke(req));
      const json* pick = &parsed;
      if (parsed.is_array()) {
        pick = nullptr;
        for (const auto& item : parsed)
          if (item.is_object() && item.value("employee", std::string{}) == actor) pick = &item;
        if (!pick && !parsed.empty()) pick = &parsed[0];
        if (!pick) throw FormatError("empty verdict array");
      }
      Verdict v = verdict_from_json(*pick);
      if (v.employee != actor) throw FormatError("verdict names '" + v.employee + "', expected '" + actor + "'");
      std::vector<Evidence> kept;
      for (auto& e : v.evidence) {
        if (ids.count(e.record_id)) kept.push_back(std::move(e));
        else failures.push_back({"investigator", actor, "dropped citation of unknown record '" + e.record_id + "'"});
      }
      v.evidence = std::move(kept);
      out.push_back(std::move(v));
    } catch (const std::exception& e) {
      failures.push_back({"investigator", actor, e.what()});
    }
  }
  return out;
}

PipelineResult run_pipeline(const std::vector<ObservableRecord>& baseline,
                            const std::vector<ObservableRecord>& corpus, int sim_days,
                            Agent& agent, const PromptSet& prompts,
                            const PipelineOptions& options) {
  PipelineResult res;
  std::set<std::string> reviewed;
  for (const auto& r : baseline) reviewed.insert(r.actor);
  res.reviewed_actors.assign(reviewed.begin(), reviewed.end());
  res.baseline_decisions = run_baseline_stage(baseline, agent, prompts, options);
  const auto windows = slice_windows(sim_days, options.window_width, options.window_stride);
  res.decisions = run_triage_stage(windows, corpus, agent, prompts, options);
  if (!res.decisions.empty())
    res.verdicts = run_correlation_stage(res.decisions, corpus, agent, prompts, options, res.failures);
  return res;
}

json to_json(const StageFailure& f) {
  return {{"stage", f.stage}, {"subject", f.subject}, {"message", f.message}};
}

json to_json(const PipelineResult& r) {
  json j;
  j["reviewed_actors"] = r.reviewed_actors;
  json b = json::array(), d = json::array(), v = json::array(), f = json::array();
  for (const auto& x : r.baseline_decisions) b.push_back(to_json(x));
  for (const auto& x : r.decisions) d.push_back(to_json(x));
  for (const auto& x : r.verdicts) v.push_back(to_json(x));
  for (const auto& x : r.failures) f.push_back(to_json(x));
  j["baseline_decisions"] = b;
  j["decisions"] = d;
  j["verdicts"] = v;
  j["failures"] = f;
  return j;
}

PipelineResult result_from_json(const json& j, std::vector<std::string>* dropped) {
  if (!j.is_object()) throw FormatError("run document must be an object");
  PipelineResult r;
  try {
    r.reviewed_actors = j.value("reviewed_actors", std::vector<std::string>{});
    for (const auto& x : j.value("baseline_decisions", json::array()))
      r.baseline_decisions.push_back(decision_from_json(x));
    for (const auto& x : j.value("decisions", json::array())) r.decisions.push_back(decision_from_json(x));
    for (const auto& x : j.value("failures", json::array()))
      r.failures.push_back({x.value("stage", std::string{}), x.value("subject", std::string{}),
                            x.value("message", std::string{})});
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed run document: ") + e.what());
  }
  for (const auto& x : j.value("verdicts", json::array())) {
    try {
      r.verdicts.push_back(verdict_from_json(x));
    } catch (const FormatError& e) {
      if (dropped) dropped->push_back(e.what());
    }
  }
  return r;
}

}  // namespace orgforge
