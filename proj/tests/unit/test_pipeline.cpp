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

// Windowing, response extraction, the three pipeline stages and the rule agent.

#include <gtest/gtest.h>

#include <algorithm>
#include <deque>
#include <fstream>
#include <set>

#include "orgforge/errors.hpp"
#include "orgforge/generate.hpp"
#include "orgforge/pipeline.hpp"
#include "test_support.hpp"

namespace orgforge {
namespace {

using orgforge::testing::reference_corpus;
using orgforge::testing::TempDir;

/// Replays canned responses and keeps every request it saw.
class ScriptedAgent final : public Agent {
 public:
  explicit ScriptedAgent(std::deque<std::string> replies) : replies_(std::move(replies)) {}
  std::string invoke(const AgentRequest& request) override {
    requests.push_back(request);
    if (replies_.empty()) throw std::runtime_error("script exhausted");
    auto r = replies_.front();
    replies_.pop_front();
    return r;
  }
  std::string model_id() const override { return "scripted"; }
  std::vector<AgentRequest> requests;

 private:
  std::deque<std::string> replies_;
};

ObservableRecord rec(std::string id, std::string actor, Surface s, std::string type, int day,
                     int minute) {
  auto r = make_record(actor, s, std::move(type), day, minute);
  r.record_id = std::move(id);
  return r;
}

// --- Windows ---

TEST(SliceWindowsTest, WeeklyWindowsOverFiftyOneDays) {
  auto w = slice_windows(51, 7, 7);
  ASSERT_EQ(w.size(), 8u);
  EXPECT_EQ(w.front(), (Window{1, 7}));
  EXPECT_EQ(w.back(), (Window{50, 51}));
}

TEST(SliceWindowsTest, StrideOneAndWidthOne) {
  EXPECT_EQ(slice_windows(51, 7, 1).size(), 45u);
  EXPECT_EQ(slice_windows(51, 7, 1).back(), (Window{45, 51}));
  auto daily = slice_windows(51, 1, 1);
  ASSERT_EQ(daily.size(), 51u);
  for (int d = 1; d <= 51; ++d) EXPECT_EQ(daily[d - 1], (Window{d, d}));
  EXPECT_THROW(slice_windows(51, 0, 1), std::invalid_argument);
}

TEST(SliceWindowsTest, CoverageProperty) {
  for (int days = 1; days <= 60; days += 7)
    for (int width = 1; width <= 9; ++width)
      for (int stride = 1; stride <= width; ++stride) {
        auto ws = slice_windows(days, width, stride);
        std::vector<int> covered(days + 1, 0);
        for (const auto& w : ws) {
          ASSERT_LE(w.end_day, days);
          ASSERT_LE(w.end_day - w.start_day + 1, width);
          for (int d = w.start_day; d <= w.end_day; ++d) covered[d] = 1;
        }
        EXPECT_EQ(ws.back().end_day, days);
        for (int d = 1; d <= days; ++d) ASSERT_TRUE(covered[d]) << days << "/" << width << "/" << stride;
      }
}

// --- Extraction ---

TEST(ExtractStructuredTest, FencedBlock) {
  auto j = extract_structured("Here you go:\n```json\n{\"employee\": \"Jax\"}\n```\nDone.");
  EXPECT_EQ(j["employee"], "Jax");
}

TEST(ExtractStructuredTest, BareAndEmbeddedDocuments) {
  EXPECT_EQ(extract_structured("  [1, 2] ").size(), 2u);
  auto j = extract_structured("My verdict is {\"employee\": \"Tasha\", \"n\": [1, {\"x\": \"}\"}]} ok");
  EXPECT_EQ(j["employee"], "Tasha");
  EXPECT_EQ(extract_structured("noise [oops {\"a\": 1}")["a"], 1);
}

TEST(ExtractStructuredTest, NothingParsesCarriesRawText) {
  try {
    extract_structured("I could not decide.");
    FAIL() << "expected ExtractionError";
  } catch (const ExtractionError& e) {
    EXPECT_EQ(e.raw(), "I could not decide.");
  }
}

TEST(VerdictJsonTest, LenientFieldsAndRoundTrip) {
  auto v = verdict_from_json(json::parse(
      R"({"actor": "Jax", "verdict_class": "likely_threat", "evidence": ["evt-1", {"record_id": "evt-2", "note": "n"}]})"));
  EXPECT_EQ(v.employee, "Jax");
  EXPECT_EQ(v.verdict_class, VerdictClass::likely_threat);
  ASSERT_EQ(v.evidence.size(), 2u);
  EXPECT_EQ(v.evidence[1].note, "n");
  EXPECT_EQ(v.confidence, Confidence::low);
  auto back = verdict_from_json(to_json(v));
  EXPECT_EQ(to_json(back), to_json(v));
  EXPECT_THROW(verdict_from_json(json::parse(R"({"employee": "Jax", "verdict": "guilty"})")),
               FormatError);
  EXPECT_THROW(verdict_from_json(json::parse(R"({"verdict": "innocent"})")), FormatError);
}

TEST(DecisionJsonTest, RoundTrip) {
  EscalationDecision d{"Tasha", {8, 14}, {"anomalous_ip", "outside_business_hours"},
                       Stage::credential_scan, {"evt-3"}};
  auto back = decision_from_json(to_json(d));
  EXPECT_EQ(to_json(back), to_json(d));
}

// --- Prompts ---

TEST(PromptSetTest, OfficialBuiltInAndFileOverrides) {
  auto official = PromptSet::load("official", "");
  EXPECT_EQ(official.prompt_id(AgentRole::triage), "official/triage");
  EXPECT_FALSE(official.text(AgentRole::investigator).empty());

  TempDir dir("prompts");
  std::ofstream(dir.path() / "v2_natural_investigator.txt") << "Investigate plainly.";
  auto v2 = PromptSet::load("v2_natural", dir.path().string());
  EXPECT_EQ(v2.variant(), "v2_natural");
  EXPECT_EQ(v2.prompt_id(AgentRole::investigator), "v2_natural/investigator");
  EXPECT_EQ(v2.text(AgentRole::investigator), "Investigate plainly.");
  EXPECT_EQ(v2.text(AgentRole::triage), official.text(AgentRole::triage));
  EXPECT_THROW(PromptSet::load("v3_examples_first", ""), ConfigError);
}

// --- Signals and triage ---

TEST(RecordSignalsTest, FlagsAndTelemetryAnomaly) {
  auto r = rec("a", "Jax", Surface::telemetry, "repo_clone", 20, 600);
  r.clone_count = 9;
  EXPECT_TRUE(record_signals(r).empty());
  r.clone_count = 10;
  EXPECT_EQ(record_signals(r), std::vector<std::string>{"telemetry_anomaly"});
  auto t = rec("b", "Tasha", Surface::telemetry, "ticket_read", 12, 600);
  t.department = "HR";
  t.resource_department = "Finance";
  EXPECT_EQ(record_signals(t), std::vector<std::string>{"telemetry_anomaly"});
  auto a = rec("c", "Jax", Surface::idp, "idp_auth", 20, 23 * 60);
  a.anomalous_ip = true;
  a.new_device = true;
  EXPECT_EQ(record_signals(a),
            (std::vector<std::string>{"outside_business_hours", "anomalous_ip", "new_device"}));
}

TEST(TriageTest, SingleSignalNotEscalatedTwoSignalsAre) {
  PromptSet prompts;
  RuleAgent agent;
  auto late = rec("a", "Avery", Surface::slack, "slack_message", 2, 23 * 60);
  std::vector<ObservableRecord> one{late};
  EXPECT_TRUE(run_triage_stage(slice_windows(7), one, agent, prompts).empty());

  auto mail = rec("b", "Avery", Surface::email, "email_sent", 3, 600);
  mail.is_external = true;
  std::vector<ObservableRecord> two{late, mail};
  auto out = run_triage_stage(slice_windows(7), two, agent, prompts);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].actor, "Avery");
  EXPECT_EQ(out[0].stage, Stage::triage);
  EXPECT_EQ(out[0].signals, (std::vector<std::string>{"is_external", "outside_business_hours"}));
  EXPECT_EQ(out[0].record_ids, (std::vector<std::string>{"a", "b"}));

  // Signals in different windows never combine.
  mail.day = 9;
  std::vector<ObservableRecord> split{late, mail};
  EXPECT_TRUE(run_triage_stage(slice_windows(14), split, agent, prompts).empty());
}

TEST(TriageTest, CredentialScanEscalatesSingleFatalRecord) {
  PromptSet prompts;
  RuleAgent agent;
  auto pr = rec("p", "Jordan", Surface::pr, "pr_opened", 5, 600);
  pr.intrinsically_fatal = true;
  std::vector<ObservableRecord> corpus{pr};
  auto out = run_triage_stage(slice_windows(7), corpus, agent, prompts);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].stage, Stage::credential_scan);
  EXPECT_EQ(out[0].record_ids, std::vector<std::string>{"p"});
}

TEST(TriageTest, AgentModeAddsFlagAndFailureNamesWindow) {
  PromptSet prompts;
  auto late = rec("a", "Avery", Surface::slack, "slack_message", 2, 23 * 60);
  std::vector<ObservableRecord> corpus{late};
  PipelineOptions opts;
  opts.triage_mode = TriageMode::agent;
  ScriptedAgent flagging({R"([{"employee": "Avery"}, {"employee": "Nobody"}])"});
  auto out = run_triage_stage(slice_windows(7), corpus, flagging, prompts, opts);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].signals, (std::vector<std::string>{"agent_flagged", "outside_business_hours"}));
  ASSERT_EQ(flagging.requests.size(), 1u);
  EXPECT_EQ(flagging.requests[0].role, AgentRole::triage);

  ScriptedAgent broken({"not json"});
  try {
    run_triage_stage(slice_windows(7), corpus, broken, prompts, opts);
    FAIL();
  } catch (const AgentError& e) {
    EXPECT_NE(std::string(e.what()).find("days 1-7"), std::string::npos) << e.what();
  }
}

TEST(BaselineStageTest, FlagsOnlyKnownActors) {
  PromptSet prompts;
  auto a = rec("a", "Avery", Surface::slack, "slack_message", 1, 600);
  std::vector<ObservableRecord> baseline{a};
  ScriptedAgent agent({R"(["Avery", "Mallory"])"});
  auto out = run_baseline_stage(baseline, agent, prompts);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].actor, "Avery");
  EXPECT_EQ(out[0].stage, Stage::baseline);
  ScriptedAgent idle({});
  EXPECT_TRUE(run_baseline_stage({}, idle, prompts).empty());
  EXPECT_TRUE(idle.requests.empty());
  ScriptedAgent garbled({"no idea"});
  EXPECT_THROW(run_baseline_stage(baseline, garbled, prompts), AgentError);
}

// --- Investigation context ---

TEST(InvestigationContextTest, CrossActorRecordsBothDirections) {
  auto call = rec("c1", "Jax", Surface::phone, "phone_call", 22, 600);
  call.counterparty = "Chris";
  auto later_call = rec("c2", "Jax", Surface::phone, "phone_call", 22, 700);
  later_call.counterparty = "Chris";
  auto other_day = rec("c3", "Jax", Surface::phone, "phone_call", 23, 500);
  other_day.counterparty = "Chris";
  auto auth = rec("s1", "Chris", Surface::idp, "idp_auth", 22, 612);
  auth.preceded_by_call_record = true;
  auth.call_to_auth_gap_minutes = 12;
  auto plain = rec("s2", "Chris", Surface::idp, "idp_auth", 22, 480);
  std::vector<ObservableRecord> corpus{plain, call, auth, later_call, other_day};

  auto victim = investigation_context("Chris", corpus, {});
  std::vector<std::string> ids;
  for (const auto& r : victim["cross_actor_records"]) ids.push_back(r["record_id"]);
  EXPECT_EQ(ids, std::vector<std::string>{"c1"});
  EXPECT_EQ(victim["timeline"].size(), 2u);

  auto caller = investigation_context("Jax", corpus, {});
  ids.clear();
  for (const auto& r : caller["cross_actor_records"]) ids.push_back(r["record_id"]);
  EXPECT_EQ(ids, std::vector<std::string>{"s1"});
  for (const char* key : {"actor", "escalations", "timeline", "slack_history",
                          "cross_actor_records", "behavior_definitions"})
    EXPECT_TRUE(caller.contains(key)) << key;
  EXPECT_EQ(caller["behavior_definitions"].size(), kAllBehaviors.size());
}

// --- Correlation ---

TEST(CorrelationTest, UnknownCitationsDroppedAndRecorded) {
  PromptSet prompts;
  auto a = rec("evt-1", "Jax", Surface::slack, "slack_message", 20, 600);
  std::vector<ObservableRecord> corpus{a};
  std::vector<EscalationDecision> esc{{"Jax", {15, 21}, {"x", "y"}, Stage::triage, {"evt-1"}}};
  ScriptedAgent agent(
      {R"({"employee": "Jax", "verdict": "suspicious", "behaviors": ["sentiment_drift"],
           "evidence": [{"record_id": "evt-1"}, {"record_id": "evt-999"}]})"});
  std::vector<StageFailure> failures;
  auto v = run_correlation_stage(esc, corpus, agent, prompts, {}, failures);
  ASSERT_EQ(v.size(), 1u);
  ASSERT_EQ(v[0].evidence.size(), 1u);
  EXPECT_EQ(v[0].evidence[0].record_id, "evt-1");
  ASSERT_EQ(failures.size(), 1u);
  EXPECT_NE(failures[0].message.find("evt-999"), std::string::npos);
}

TEST(CorrelationTest, UnparseableVerdictIsFailureNotAbort) {
  PromptSet prompts;
  std::vector<ObservableRecord> corpus{rec("evt-1", "Jax", Surface::slack, "slack_message", 20, 600),
                                       rec("evt-2", "Tasha", Surface::slack, "slack_message", 20, 600)};
  std::vector<EscalationDecision> esc{{"Jax", {15, 21}, {}, Stage::triage, {}},
                                      {"Tasha", {15, 21}, {}, Stage::triage, {}},
                                      {"Avery", {1, 4}, {"agent_flagged"}, Stage::baseline, {}}};
  ScriptedAgent agent({"I refuse.", R"({"employee": "Tasha", "verdict": "innocent"})"});
  std::vector<StageFailure> failures;
  auto v = run_correlation_stage(esc, corpus, agent, prompts, {}, failures);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].employee, "Tasha");
  ASSERT_EQ(failures.size(), 1u);
  EXPECT_EQ(failures[0].subject, "Jax");
  EXPECT_EQ(agent.requests.size(), 2u) << "baseline-only actors are not investigated";
}

// --- Rule agent ---

Verdict investigate(const std::string& actor, const std::vector<ObservableRecord>& corpus) {
  RuleAgent agent;
  PromptSet prompts;
  AgentRequest req{AgentRole::investigator, prompts.prompt_id(AgentRole::investigator),
                   prompts.text(AgentRole::investigator),
                   investigation_context(actor, corpus, {}), 0.0, 4096};
  return verdict_from_json(extract_structured(agent.invoke(req)));
}

std::vector<ObservableRecord> vishing_scene() {
  auto normal = rec("v1", "Chris", Surface::idp, "idp_auth", 22, 500);
  normal.device_id = "ios-aaaa";
  normal.platform = Platform::ios;
  normal.mfa_method = MfaMethod::push;
  auto call = rec("v2", "Jax", Surface::phone, "phone_call", 22, 640);
  call.counterparty = "Chris";
  auto session = rec("v3", "Chris", Surface::idp, "idp_auth", 22, 655);
  session.device_id = "macos-bbbb";
  session.platform = Platform::macos;
  session.mfa_method = MfaMethod::totp;
  session.anomalous_ip = true;
  session.new_device = true;
  session.preceded_by_call_record = true;
  session.call_to_auth_gap_minutes = 15;
  return {normal, call, session};
}

TEST(RuleAgentTest, VishingVictimExoneratedCallerCited) {
  auto corpus = vishing_scene();
  auto chris = investigate("Chris", corpus);
  EXPECT_EQ(chris.verdict_class, VerdictClass::innocent);
  EXPECT_TRUE(chris.behaviors.empty());
  std::set<std::string> cited;
  for (const auto& e : chris.evidence) cited.insert(e.record_id);
  EXPECT_EQ(cited, (std::set<std::string>{"v2", "v3"}));

  auto jax = investigate("Jax", corpus);
  EXPECT_EQ(jax.behaviors, std::vector<std::string>{"social_engineering"});
  cited.clear();
  for (const auto& e : jax.evidence) cited.insert(e.record_id);
  EXPECT_EQ(cited, (std::set<std::string>{"v2", "v3"}));
}

TEST(RuleAgentTest, UnexplainedUnfamiliarSessionIsIdpAnomaly) {
  auto corpus = vishing_scene();
  corpus.erase(corpus.begin() + 1);  // no call
  auto chris = investigate("Chris", corpus);
  EXPECT_EQ(chris.verdict_class, VerdictClass::suspicious);
  EXPECT_EQ(chris.behaviors, std::vector<std::string>{"idp_anomaly"});
}

TEST(RuleAgentTest, VerdictClassFollowsBehaviorCount) {
  auto pr = rec("p", "Jordan", Surface::pr, "pr_opened", 5, 600);
  pr.intrinsically_fatal = true;
  EXPECT_EQ(investigate("Jordan", {pr}).verdict_class, VerdictClass::suspicious);
  auto mail = rec("m", "Jordan", Surface::email, "email_sent", 6, 21 * 60);
  mail.recipient_domain = "gmail.com";
  mail.is_external = true;
  auto v = investigate("Jordan", {pr, mail});
  EXPECT_EQ(v.verdict_class, VerdictClass::likely_threat);
  EXPECT_EQ(v.behaviors, (std::vector<std::string>{"secret_in_commit", "data_exfil_email"}));
  EXPECT_EQ(investigate("Avery", {rec("x", "Avery", Surface::slack, "slack_message", 3, 600)})
                .verdict_class,
            VerdictClass::innocent);
}

TEST(RuleAgentTest, ResponsesAreFencedJson) {
  RuleAgent agent;
  PromptSet prompts;
  AgentRequest req{AgentRole::investigator, "", "", investigation_context("Chris", vishing_scene(), {}),
                   0.0, 4096};
  auto raw = agent.invoke(req);
  EXPECT_EQ(raw.rfind("```json\n", 0), 0u);
  req.context = {{"timeline", {{{"bogus", 1}}}}};
  EXPECT_THROW(agent.invoke(req), AgentError);
}

TEST(PipelineTest, ReferenceCorpusOutcome) {
  const auto& corpus = reference_corpus(3);
  RuleAgent agent;
  PromptSet prompts;
  auto res = run_pipeline(corpus.baseline(), corpus.observable(), 51, agent, prompts);
  EXPECT_TRUE(res.failures.empty());
  std::set<std::string> triaged, scanned;
  for (const auto& d : res.decisions) {
    (d.stage == Stage::credential_scan ? scanned : triaged).insert(d.actor);
  }
  EXPECT_TRUE(triaged.count("Tasha"));
  EXPECT_TRUE(triaged.count("Jax"));
  EXPECT_TRUE(scanned.count("Jordan"));
  std::map<std::string, VerdictClass> cls;
  for (const auto& v : res.verdicts) cls[v.employee] = v.verdict_class;
  EXPECT_EQ(cls.at("Jax"), VerdictClass::likely_threat);
  EXPECT_EQ(cls.at("Tasha"), VerdictClass::likely_threat);
  EXPECT_EQ(cls.at("Chris"), VerdictClass::innocent);

  std::vector<std::string> dropped;
  auto back = result_from_json(to_json(res), &dropped);
  EXPECT_TRUE(dropped.empty());
  EXPECT_EQ(to_json(back).dump(), to_json(res).dump());
}

TEST(PipelineTest, ResultFromJsonDropsBadVerdicts) {
  PipelineResult r;
  r.verdicts.push_back({"Jax", VerdictClass::likely_threat, {}, {}, "", Confidence::high});
  auto j = to_json(r);
  j["verdicts"].push_back({{"employee", "Tasha"}, {"verdict", "maybe"}});
  std::vector<std::string> dropped;
  auto back = result_from_json(j, &dropped);
  EXPECT_EQ(back.verdicts.size(), 1u);
  EXPECT_EQ(dropped.size(), 1u);
}

}  // namespace
}  // namespace orgforge
