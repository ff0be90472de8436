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

#include <algorithm>
#include <map>
#include <set>

#include "orgforge/catalog.hpp"
#include "orgforge/errors.hpp"
#include "orgforge/formats.hpp"
#include "orgforge/injection.hpp"
#include "orgforge/pipeline.hpp"

namespace orgforge {
namespace {

std::vector<ObservableRecord> decode_all(const json& arr) {
  std::vector<ObservableRecord> out;
  if (!arr.is_array()) return out;
  for (const auto& j : arr) out.push_back(decode_jsonl(j.dump()));
  return out;
}

bool is_personal_domain(const std::optional<std::string>& d) {
  if (!d) return false;
  return std::find(catalog::kPersonalDomains.begin(), catalog::kPersonalDomains.end(), *d) !=
         catalog::kPersonalDomains.end();
}

bool is_auth(const ObservableRecord& r) { return r.surface == Surface::idp; }
bool unfamiliar(const ObservableRecord& r) { return r.anomalous_ip || r.new_device; }

/// Content cues the structural flags do not carry.
std::vector<std::string> content_cues(const ObservableRecord& r) {
  std::vector<std::string> out;
  if (r.reply_to_domain) out.emplace_back("reply-to on an unfamiliar domain");
  if (r.event_type == "phone_call") out.emplace_back("outbound call to a colleague");
  if (r.event_type == "slack_dm" && r.sender_in_known_contacts == false)
    out.emplace_back("direct message to a stranger");
  if (r.hoarding_phase) out.emplace_back("host staging activity");
  if (r.surface == Surface::slack && contains_passive_aggressive(r.payload))
    out.emplace_back("hostile message tone");
  if (r.surface == Surface::pr && !find_synthetic_credentials(r.payload).empty())
    out.emplace_back("credential in pull request");
  if (r.surface == Surface::email && is_personal_domain(r.recipient_domain))
    out.emplace_back("mail to a personal address");
  return out;
}

std::string baseline_response(const json& context) {
  std::map<std::string, std::set<std::string>> kinds;
  for (const auto& r : decode_all(context.value("records", json::array())))
    for (auto& k : record_signals(r)) kinds[r.actor].insert(k);
  json out = json::array();
  for (const auto& [actor, ks] : kinds) {
    if (ks.size() < 2) continue;
    std::string reason;
    for (const auto& k : ks) reason += (reason.empty() ? "" : ", ") + k;
    out.push_back({{"employee", actor}, {"reason", reason}});
  }
  return out.dump();
}

std::string triage_response(const json& context) {
  std::map<std::string, std::set<std::string>> cues;
  for (const auto& r : decode_all(context.value("records", json::array())))
    for (auto& c : content_cues(r)) cues[r.actor].insert(c);
  json out = json::array();
  for (const auto& [actor, cs] : cues)
    out.push_back({{"employee", actor}, {"anomalies", std::vector<std::string>(cs.begin(), cs.end())}});
  return out.dump();
}

struct Finding {
  std::map<BehaviorKind, std::vector<Evidence>> behaviors;
  std::vector<Evidence> exonerating;

  void cite(BehaviorKind b, const ObservableRecord& r, std::string note) {
    behaviors[b].push_back({r.record_id, std::move(note)});
  }
};

/// The phone call that explains a call-preceded session, if the context holds one.
const ObservableRecord* matching_call(const ObservableRecord& session,
                                      const std::vector<ObservableRecord>& cross) {
  const ObservableRecord* best = nullptr;
  for (const auto& c : cross) {
    if (c.event_type != "phone_call" || c.counterparty != session.actor || c.day != session.day ||
        c.minute > session.minute)
      continue;
    if (session.call_to_auth_gap_minutes &&
        session.minute - c.minute != *session.call_to_auth_gap_minutes)
      continue;
    if (!best || c.minute > best->minute) best = &c;
  }
  return best;
}

std::string investigator_response(const json& context) {
  const std::string actor = context.value("actor", std::string{});
  const auto timeline = decode_all(context.value("timeline", json::array()));
  const auto cross = decode_all(context.value("cross_actor_records", json::array()));

  // Device profile inferred from the account's familiar sessions.
  std::set<std::string> devices;
  std::set<Platform> platforms;
  std::set<MfaMethod> factors;
  std::set<int> normal_days;
  for (const auto& r : timeline) {
    if (!is_auth(r) || unfamiliar(r)) continue;
    if (r.device_id) devices.insert(*r.device_id);
    if (r.platform) platforms.insert(*r.platform);
    if (r.mfa_method) factors.insert(*r.mfa_method);
    normal_days.insert(r.day);
  }

  Finding f;
  for (const auto& r : timeline) {
    if (is_auth(r) && unfamiliar(r)) {
      const bool off_profile = (r.device_id && !devices.count(*r.device_id)) ||
                               (r.platform && !platforms.count(*r.platform)) ||
                               (r.mfa_method && !factors.count(*r.mfa_method));
      const auto* call = r.preceded_by_call_record == true ? matching_call(r, cross) : nullptr;
      if (call && off_profile && normal_days.count(r.day)) {
        f.exonerating.push_back({r.record_id, "session on an unfamiliar device and factor, minutes after a call from " + call->actor + "; the holder also signed in normally that day"});
        f.exonerating.push_back({call->record_id, "the call that preceded the session"});
      } else {
        f.cite(BehaviorKind::idp_anomaly, r, "sign-in from an unfamiliar device or network");
      }
      continue;
    }
    if (r.intrinsically_fatal || (r.surface == Surface::pr && !find_synthetic_credentials(r.payload).empty()))
      f.cite(BehaviorKind::secret_in_commit, r, "credential committed in a pull request");
    if (r.clone_count && *r.clone_count >= kCloneSignalThreshold)
      f.cite(BehaviorKind::excessive_repo_cloning, r, std::to_string(*r.clone_count) + " clones in one burst");
    if (r.resource_department && r.department && *r.resource_department != *r.department)
      f.cite(BehaviorKind::cross_dept_snooping, r, "read a " + *r.resource_department + " ticket");
    if (r.surface == Surface::email && is_personal_domain(r.recipient_domain))
      f.cite(BehaviorKind::data_exfil_email, r, "internal material mailed to " + *r.recipient_domain);
    if (r.hoarding_phase)
      f.cite(BehaviorKind::host_data_hoarding, r, "staging phase " + std::to_string(*r.hoarding_phase));
    if (r.surface == Surface::slack && contains_passive_aggressive(r.payload))
      f.cite(BehaviorKind::sentiment_drift, r, "hostile framing");
    if (r.reply_to_domain)
      f.cite(BehaviorKind::social_engineering, r, "reply-to on lookalike domain " + *r.reply_to_domain);
    if (r.event_type == "slack_dm" && r.counterparty)
      f.cite(BehaviorKind::social_engineering, r, "impersonation message to " + *r.counterparty);
    if (r.surface == Surface::email && r.sender_in_known_contacts == false && r.followup_due_day)
      f.cite(BehaviorKind::social_engineering, r, "unsolicited contact to " + r.counterparty.value_or("a colleague"));
    if (r.event_type == "phone_call" && r.counterparty) {
      f.cite(BehaviorKind::social_engineering, r, "call to " + *r.counterparty);
      for (const auto& a : cross) {
        if (a.actor != *r.counterparty || a.preceded_by_call_record != true || a.day != r.day)
          continue;
        if (a.call_to_auth_gap_minutes ? a.minute - r.minute == *a.call_to_auth_gap_minutes
                                       : a.minute >= r.minute)
          f.cite(BehaviorKind::social_engineering, a, *r.counterparty + " signed in from an unfamiliar device right after the call");
      }
    }
    const bool explained = r.hoarding_phase || is_personal_domain(r.recipient_domain);
    if (r.outside_business_hours && !explained)
      f.cite(BehaviorKind::unusual_hours_access, r, "activity outside business hours");
  }

  Verdict v;
  v.employee = actor;
  std::vector<Evidence> evidence;
  for (auto b : kAllBehaviors) {
    auto it = f.behaviors.find(b);
    if (it == f.behaviors.end()) continue;
    v.behaviors.emplace_back(to_string(b));
    evidence.insert(evidence.end(), it->second.begin(), it->second.end());
  }
  if (v.behaviors.empty()) evidence = f.exonerating;
  std::set<std::string> seen;
  for (auto& e : evidence)
    if (seen.insert(e.record_id).second) v.evidence.push_back(std::move(e));
  std::sort(v.evidence.begin(), v.evidence.end(),
            [](const Evidence& a, const Evidence& b) { return a.record_id < b.record_id; });

  switch (v.behaviors.size()) {
    case 0:
      v.verdict_class = VerdictClass::innocent;
      v.recommended_action = f.exonerating.empty()
                                 ? "No action."
                                 : "No action against the account holder; treat the session as a vishing compromise and reset credentials.";
      v.confidence = f.exonerating.empty() ? Confidence::medium : Confidence::high;
      break;
    case 1:
      v.verdict_class = VerdictClass::suspicious;
      v.recommended_action = "Open a case and review with the employee's manager.";
      v.confidence = Confidence::medium;
      break;
    default:
      v.verdict_class = VerdictClass::likely_threat;
      v.recommended_action = "Escalate to incident response and restrict access.";
      v.confidence = Confidence::high;
  }
  return "```json\n" + to_json(v).dump(2) + "\n```";
}

}  // namespace

std::string RuleAgent::invoke(const AgentRequest& request) {
  try {
    switch (request.role) {
      case AgentRole::baseline: return baseline_response(request.context);
      case AgentRole::triage: return triage_response(request.context);
      case AgentRole::investigator: return investigator_response(request.context);
    }
  } catch (const FormatError& e) {
    throw AgentError(std::string("rule agent could not read its context: ") + e.what());
  }
  throw AgentError("rule agent: unknown role");
}

}  // namespace orgforge
