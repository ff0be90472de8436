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

#include "orgforge/scoring.hpp"

#include <algorithm>
#include <cctype>
#include <array>
#include <cmath>

#include "orgforge/errors.hpp"

namespace orgforge {
namespace {

const std::map<BehaviorKind, std::vector<std::string>>& default_synonyms() {
  static const std::map<BehaviorKind, std::vector<std::string>> m{
      {BehaviorKind::secret_in_commit,
       {"secret", "secrets", "credential", "credentials", "key", "keys", "token", "password",
        "commit", "committed", "leak", "leaked", "hardcoded", "aws", "exposed"}},
      {BehaviorKind::unusual_hours_access,
       {"unusual", "hours", "hour", "after", "off", "outside", "business", "late", "night",
        "overnight", "odd", "ghost", "login", "logins", "signin", "access", "early", "weekend"}},
      {BehaviorKind::excessive_repo_cloning,
       {"excessive", "repo", "repos", "repository", "repositories", "clone", "clones", "cloning",
        "bulk", "mass", "download"}},
      {BehaviorKind::sentiment_drift,
       {"sentiment", "drift", "tone", "hostile", "passive", "aggressive", "negative", "mood",
        "disgruntled", "flat", "affect", "resentment", "frustration", "attitude"}},
      {BehaviorKind::cross_dept_snooping,
       {"cross", "dept", "department", "departments", "snooping", "snoop", "browsing", "foreign",
        "unauthorized", "tickets", "other", "lateral"}},
      {BehaviorKind::data_exfil_email,
       {"data", "exfil", "exfiltration", "email", "mail", "personal", "forward", "forwarding",
        "gmail", "external", "sent", "attachment"}},
      {BehaviorKind::host_data_hoarding,
       {"host", "data", "hoarding", "staging", "staged", "archive", "archiving", "bulk", "copy",
        "compress", "compressed", "collection", "removable", "usb"}},
      {BehaviorKind::social_engineering,
       {"social", "engineering", "phishing", "phish", "vishing", "pretext", "pretexting",
        "impersonation", "impersonating", "manipulation", "lure", "call", "lookalike"}},
      {BehaviorKind::idp_anomaly,
       {"idp", "anomaly", "anomalous", "authentication", "auth", "sso", "device", "new",
        "residential", "ip", "vpn", "mfa", "session", "impossible", "travel"}},
  };
  return m;
}

const std::set<std::string>& stop_words() {
  static const std::set<std::string> s{"a", "an", "and", "the", "of", "to", "in", "on", "by",
                                       "for", "with", "from", "at", "or", "via", "repeated",
                                       "multiple", "suspicious", "possible", "potential"};
  return s;
}

std::optional<BehaviorKind> taxonomy(const std::string& label) {
  return parse_enum<BehaviorKind>(label);
}

bool subject_has(const GroundTruth& t, const std::string& actor, BehaviorKind b) {
  auto it = t.subjects.find(actor);
  return it != t.subjects.end() && it->second.behaviors.count(b) > 0;
}

/// First verdict per employee; later duplicates are ignored.
std::map<std::string, const Verdict*> by_employee(const std::vector<Verdict>& verdicts) {
  std::map<std::string, const Verdict*> out;
  for (const auto& v : verdicts) out.emplace(v.employee, &v);
  return out;
}

json prf_json(const Prf& p) {
  return {{"precision", round3(p.precision)}, {"recall", round3(p.recall)}, {"f1", round3(p.f1)},
          {"tp", p.tp}, {"fp", p.fp}, {"fn", p.fn}};
}

}  // namespace

GroundTruth build_ground_truth(const std::vector<GroundTruthRecord>& ledger,
                               const std::map<std::string, int>& onsets,
                               const std::vector<std::string>& population) {
  GroundTruth t;
  std::set<std::string> actors(population.begin(), population.end());
  std::map<std::string, int> first_day;
  for (const auto& g : ledger) {
    actors.insert(g.record.actor);
    if (!g.true_positive) continue;
    const auto& who = g.responsible_actor();
    auto& s = t.subjects[who];
    if (g.threat_class) s.threat_class = *g.threat_class;
    if (g.behavior) s.behaviors.insert(*g.behavior);
    auto [it, fresh] = first_day.emplace(who, g.record.day);
    if (!fresh) it->second = std::min(it->second, g.record.day);
  }
  for (auto& [name, s] : t.subjects) {
    auto it = onsets.find(name);
    s.onset_day = it != onsets.end() ? it->second : first_day[name];
  }
  for (const auto& a : actors)
    if (!t.subjects.count(a)) t.innocents.insert(a);

  // Vishing: victim-side sessions are filed under the victim with the attacker recorded.
  for (const auto& g : ledger) {
    if (!g.attacker_actor || g.record.surface != Surface::idp) continue;
    const auto& auth = g.record;
    for (const auto& c : ledger) {
      const auto& call = c.record;
      if (call.event_type != "phone_call" || call.actor != *g.attacker_actor ||
          call.counterparty != auth.actor || call.day != auth.day)
        continue;
      const bool gap_ok = auth.call_to_auth_gap_minutes
                              ? auth.minute - call.minute == *auth.call_to_auth_gap_minutes
                              : call.minute <= auth.minute;
      if (gap_ok) {
        t.vishing.push_back({*g.attacker_actor, auth.actor, call.record_id, auth.record_id});
        break;
      }
    }
  }

  // Hoarding trails: phase k sits on start_day + k - 1.
  std::map<std::pair<std::string, int>, std::array<std::string, 3>> trails;
  for (const auto& g : ledger) {
    const auto& r = g.record;
    if (!g.true_positive || !r.hoarding_phase || *r.hoarding_phase < 1 || *r.hoarding_phase > 3)
      continue;
    const int start = r.day - (*r.hoarding_phase - 1);
    trails[{r.actor, start}][static_cast<std::size_t>(*r.hoarding_phase - 1)] = r.record_id;
  }
  for (const auto& [key, ids] : trails) {
    if (std::any_of(ids.begin(), ids.end(), [](const auto& s) { return s.empty(); })) continue;
    t.trails.push_back({key.first, key.second, {ids.begin(), ids.end()}});
  }
  return t;
}

Prf make_prf(int tp, int fp, int fn) {
  Prf p;
  p.tp = tp;
  p.fp = fp;
  p.fn = fn;
  p.precision = tp + fp > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
  p.recall = tp + fn > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
  p.f1 = p.precision + p.recall > 0 ? 2 * p.precision * p.recall / (p.precision + p.recall) : 0.0;
  return p;
}

double round3(double x) {
  // The nudge keeps exact halves such as 0.0625 from rounding down through
  // binary representation error.
  return std::floor(x * 1000.0 + 0.5 + 1e-9) / 1000.0;
}

std::set<std::string> scored_subjects(const GroundTruth& truth, const ScoreOptions& options) {
  std::set<std::string> out;
  for (const auto& [name, s] : truth.subjects)
    if (options.scored_classes.count(s.threat_class)) out.insert(name);
  return out;
}

Prf score_triage(const std::vector<EscalationDecision>& decisions, const GroundTruth& truth,
                 const ScoreOptions& options) {
  if (truth.subjects.empty()) throw ScoringError("ground truth has no subjects");
  const auto scored = scored_subjects(truth, options);
  std::set<std::string> escalated;
  for (const auto& d : decisions)
    if (d.stage != Stage::baseline) escalated.insert(d.actor);
  int tp = 0, fp = 0;
  for (const auto& a : escalated) {
    if (scored.count(a)) ++tp;
    else if (truth.innocents.count(a)) ++fp;
  }
  return make_prf(tp, fp, static_cast<int>(scored.size()) - tp);
}

BaselineFp baseline_fp_rate(const std::vector<EscalationDecision>& baseline_decisions,
                            const GroundTruth& truth, const std::vector<std::string>& reviewed) {
  std::set<std::string> pool;
  if (reviewed.empty()) pool = truth.innocents;
  else
    for (const auto& a : reviewed)
      if (truth.innocents.count(a)) pool.insert(a);
  if (pool.empty()) throw ScoringError("no innocent employees to compute a baseline rate over");
  std::set<std::string> flagged;
  for (const auto& d : baseline_decisions)
    if (pool.count(d.actor)) flagged.insert(d.actor);
  BaselineFp b;
  b.flagged = static_cast<int>(flagged.size());
  b.innocents = static_cast<int>(pool.size());
  b.rate = static_cast<double>(b.flagged) / b.innocents;
  return b;
}

double onset_sensitivity(const std::vector<EscalationDecision>& decisions,
                         const GroundTruth& truth, const ScoreOptions& options) {
  const auto scored = scored_subjects(truth, options);
  if (scored.empty()) return 0.0;
  std::set<std::string> early;
  for (const auto& d : decisions) {
    if (!scored.count(d.actor)) continue;
    if (d.window.end_day < truth.subjects.at(d.actor).onset_day) early.insert(d.actor);
  }
  return static_cast<double>(early.size()) / static_cast<double>(scored.size());
}

Prf score_verdicts(const std::vector<Verdict>& verdicts, const GroundTruth& truth,
                   const ScoreOptions& options) {
  const auto scored = scored_subjects(truth, options);
  int tp = 0, fp = 0;
  for (const auto& [who, v] : by_employee(verdicts)) {
    if (v->verdict_class == VerdictClass::innocent) continue;
    if (scored.count(who)) ++tp;
    else if (truth.innocents.count(who)) ++fp;
  }
  return make_prf(tp, fp, static_cast<int>(scored.size()) - tp);
}

CapabilityFlags capability_flags(const std::vector<Verdict>& verdicts, const GroundTruth& truth) {
  CapabilityFlags f;
  for (const auto& v : verdicts) {
    std::set<std::string> cited;
    for (const auto& e : v.evidence) cited.insert(e.record_id);
    for (const auto& inst : truth.vishing)
      if (cited.count(inst.call_record_id) && cited.count(inst.auth_record_id))
        f.vishing_detected = true;
    for (const auto& trail : truth.trails)
      if (std::all_of(trail.phase_record_ids.begin(), trail.phase_record_ids.end(),
                      [&](const auto& id) { return cited.count(id) > 0; }))
        f.host_trail_reconstructed = true;
  }
  return f;
}

std::map<BehaviorKind, BehaviorTally> per_behavior_breakdown(const std::vector<Verdict>& verdicts,
                                                             const GroundTruth& truth) {
  std::set<std::pair<std::string, BehaviorKind>> seen;
  std::map<BehaviorKind, BehaviorTally> out;
  for (const auto& v : verdicts) {
    for (const auto& label : v.behaviors) {
      auto b = taxonomy(label);
      if (!b || !seen.insert({v.employee, *b}).second) continue;
      auto& t = out[*b];
      if (subject_has(truth, v.employee, *b)) ++t.tp;
      else ++t.fp;
    }
  }
  return out;
}

std::vector<std::string> unscored_labels(const std::vector<Verdict>& verdicts) {
  std::set<std::string> out;
  for (const auto& v : verdicts)
    for (const auto& label : v.behaviors)
      if (!taxonomy(label)) out.insert(label);
  return {out.begin(), out.end()};
}

std::vector<std::string> label_tokens(const std::string& label) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty() && !stop_words().count(cur)) out.push_back(cur);
    cur.clear();
  };
  for (char c : label) {
    if (std::isalnum(static_cast<unsigned char>(c))) cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    else flush();
  }
  flush();
  return out;
}

TokenOverlapMatcher::TokenOverlapMatcher() {
  for (const auto& [b, words] : default_synonyms()) synonyms_[b] = {words.begin(), words.end()};
}

TokenOverlapMatcher TokenOverlapMatcher::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("synonyms", "expected an object of behavior -> tokens");
  TokenOverlapMatcher m;
  m.synonyms_.clear();
  for (const auto& [key, words] : j.items()) {
    auto b = parse_enum<BehaviorKind>(key);
    if (!b) throw ConfigError("synonyms." + key, "not a taxonomy behavior");
    if (!words.is_array()) throw ConfigError("synonyms." + key, "expected a list of tokens");
    for (const auto& w : words) m.synonyms_[*b].insert(w.get<std::string>());
  }
  return m;
}

std::optional<std::pair<BehaviorKind, double>> TokenOverlapMatcher::match(
    const std::string& label) const {
  if (auto b = taxonomy(label)) return std::pair{*b, 1.0};
  const auto tokens = label_tokens(label);
  if (tokens.empty()) return std::nullopt;
  std::optional<std::pair<BehaviorKind, double>> best;
  for (const auto& [b, words] : synonyms_) {
    const auto hits = std::count_if(tokens.begin(), tokens.end(),
                                    [&](const auto& t) { return words.count(t) > 0; });
    const double score = static_cast<double>(hits) / static_cast<double>(tokens.size());
    if (!best || score > best->second) best = std::pair{b, score};
  }
  if (!best || best->second < threshold_) return std::nullopt;
  return best;
}

std::vector<SemanticEntry> semantic_track(const std::vector<Verdict>& verdicts,
                                          const GroundTruth& truth,
                                          const SemanticMatcher& matcher) {
  std::vector<SemanticEntry> out;
  for (const auto& v : verdicts) {
    for (const auto& label : v.behaviors) {
      SemanticEntry e{v.employee, label, std::nullopt, 0.0, false};
      if (auto m = matcher.match(label)) {
        e.matched = m->first;
        e.similarity = m->second;
        e.credited = subject_has(truth, v.employee, m->first);
      }
      out.push_back(std::move(e));
    }
  }
  return out;
}

ScoreReport score_run(const PipelineResult& run, const GroundTruth& truth,
                      const ScoreOptions& options, const SemanticMatcher* matcher) {
  if (truth.subjects.empty()) throw ScoringError("ground truth has no subjects");
  if (truth.innocents.empty()) throw ScoringError("ground truth has no innocent employees");
  ScoreReport r;
  r.scored_classes = options.scored_classes;
  r.triage = score_triage(run.decisions, truth, options);
  r.verdict = score_verdicts(run.verdicts, truth, options);
  r.baseline = baseline_fp_rate(run.baseline_decisions, truth, run.reviewed_actors);
  r.onset_sensitivity = onset_sensitivity(run.decisions, truth, options);
  r.flags = capability_flags(run.verdicts, truth);
  r.per_behavior = per_behavior_breakdown(run.verdicts, truth);
  r.unscored_labels = unscored_labels(run.verdicts);

  std::set<std::string> escalated;
  for (const auto& d : run.decisions)
    if (d.stage != Stage::baseline) escalated.insert(d.actor);
  const auto verdicts = by_employee(run.verdicts);
  for (const auto& [name, s] : truth.subjects) {
    auto& c = r.per_class[s.threat_class];
    c.scored = options.scored_classes.count(s.threat_class) > 0;
    ++c.subjects;
    if (escalated.count(name)) ++c.escalated;
    auto it = verdicts.find(name);
    if (it != verdicts.end() && it->second->verdict_class != VerdictClass::innocent)
      ++c.positive_verdicts;
  }

  if (options.semantic_track) {
    TokenOverlapMatcher fallback;
    try {
      r.semantic = semantic_track(run.verdicts, truth, matcher ? *matcher : fallback);
    } catch (const std::exception&) {
      r.semantic.reset();
    }
  }
  return r;
}

json to_json(const ScoreReport& r) {
  json j;
  j["triage"] = prf_json(r.triage);
  j["verdict"] = prf_json(r.verdict);
  j["baseline_fp_rate"] = round3(r.baseline.rate);
  j["baseline_flagged"] = r.baseline.flagged;
  j["baseline_innocents"] = r.baseline.innocents;
  j["onset_sensitivity"] = round3(r.onset_sensitivity);
  j["vishing_detected"] = r.flags.vishing_detected;
  j["host_trail_reconstructed"] = r.flags.host_trail_reconstructed;
  json pb = json::object();
  for (const auto& [b, t] : r.per_behavior) pb[std::string(to_string(b))] = {{"tp", t.tp}, {"fp", t.fp}};
  j["per_behavior"] = pb;
  json pc = json::object();
  for (const auto& [c, o] : r.per_class)
    pc[std::string(to_string(c))] = {{"subjects", o.subjects},
                                     {"escalated", o.escalated},
                                     {"positive_verdicts", o.positive_verdicts},
                                     {"scored", o.scored}};
  j["per_class"] = pc;
  j["unscored_labels"] = r.unscored_labels;
  json classes = json::array();
  for (auto c : r.scored_classes) classes.push_back(std::string(to_string(c)));
  j["scored_classes"] = classes;
  if (r.semantic) {
    json s = json::array();
    for (const auto& e : *r.semantic)
      s.push_back({{"employee", e.employee},
                   {"label", e.label},
                   {"matched", e.matched ? json(std::string(to_string(*e.matched))) : json(nullptr)},
                   {"similarity", round3(e.similarity)},
                   {"credited", e.credited}});
    j["semantic_track"] = s;
  }
  return j;
}

}  // namespace orgforge
