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

#pragma once

#include <map>
#include <memory>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "orgforge/record.hpp"

namespace orgforge {

using json = nlohmann::ordered_json;

struct Window {
  int start_day = 1;
  int end_day = 1;  // inclusive
  friend bool operator==(const Window&, const Window&) = default;
};

/// Windows of `width` days starting every `stride` days, ending with the first
/// window that reaches `sim_days`. The last one may be short.
std::vector<Window> slice_windows(int sim_days, int width = 7, int stride = 7);

enum class Stage { baseline, triage, credential_scan };
enum class AgentRole { baseline, triage, investigator };
enum class VerdictClass { innocent, suspicious, likely_threat };
enum class Confidence { low, medium, high };
enum class TriageMode { structural, agent };

std::string_view to_string(Stage s) noexcept;
std::string_view to_string(AgentRole r) noexcept;
std::string_view to_string(VerdictClass v) noexcept;
std::string_view to_string(Confidence c) noexcept;
std::string_view to_string(TriageMode m) noexcept;
std::optional<VerdictClass> parse_verdict_class(std::string_view s) noexcept;
std::optional<TriageMode> parse_triage_mode(std::string_view s) noexcept;

struct EscalationDecision {
  std::string actor;
  Window window;
  std::vector<std::string> signals;     // distinct kinds, sorted
  Stage stage = Stage::triage;
  std::vector<std::string> record_ids;  // records that produced the signals
};

struct Evidence {
  std::string record_id;
  std::string note;
};

struct Verdict {
  std::string employee;
  VerdictClass verdict_class = VerdictClass::innocent;
  std::vector<std::string> behaviors;
  std::vector<Evidence> evidence;
  std::string recommended_action;
  Confidence confidence = Confidence::low;
};

json to_json(const EscalationDecision& d);
EscalationDecision decision_from_json(const json& j);
json to_json(const Verdict& v);
/// Lenient: accepts "verdict" or "verdict_class", bare-string evidence, missing optionals.
Verdict verdict_from_json(const json& j);

struct AgentRequest {
  AgentRole role = AgentRole::baseline;
  std::string prompt_id;
  std::string prompt;
  json context;
  double temperature = 0.0;
  int max_tokens = 4096;
};

/// Anything that turns a request into raw model text.
class Agent {
 public:
  virtual ~Agent() = default;
  virtual std::string invoke(const AgentRequest& request) = 0;
  virtual std::string model_id() const = 0;
};

/// Strips code fences; on parse failure, scans for the first balanced [..] or {..}.
/// Throws ExtractionError carrying the raw text when nothing parses.
json extract_structured(const std::string& raw);

/// Prompt text per (variant, role). Files are `<variant>_<role>.txt` in `dir`;
/// the built-in official prompts fill any gap.
class PromptSet {
 public:
  PromptSet() = default;
  static PromptSet load(const std::string& variant, const std::string& dir);
  const std::string& variant() const noexcept { return variant_; }
  std::string prompt_id(AgentRole role) const;
  const std::string& text(AgentRole role) const;

 private:
  std::string variant_ = "official";
  std::map<AgentRole, std::string> text_;
};

/// Signal kinds a record contributes to the two-signal rule.
std::vector<std::string> record_signals(const ObservableRecord& r);
inline constexpr int kCloneSignalThreshold = 10;

/// Per-actor context handed to the investigator.
json investigation_context(const std::string& actor, const std::vector<ObservableRecord>& corpus,
                           const std::vector<EscalationDecision>& escalations);
/// Plain-language definitions of each taxonomy behavior.
json behavior_definitions();

struct StageFailure {
  std::string stage;
  std::string subject;  // actor or window id
  std::string message;
};

struct PipelineOptions {
  int window_width = 7;
  int window_stride = 7;
  TriageMode triage_mode = TriageMode::structural;
  double temperature = 0.0;
  int max_tokens = 4096;
};

struct PipelineResult {
  std::vector<std::string> reviewed_actors;  // actors present in the baseline file
  std::vector<EscalationDecision> baseline_decisions;
  std::vector<EscalationDecision> decisions;  // triage + credential scan
  std::vector<Verdict> verdicts;
  std::vector<StageFailure> failures;
};

std::vector<EscalationDecision> run_baseline_stage(const std::vector<ObservableRecord>& baseline,
                                                   Agent& agent, const PromptSet& prompts,
                                                   const PipelineOptions& options = {});
/// Throws AgentError naming the window when the agent fails in agent triage mode.
std::vector<EscalationDecision> run_triage_stage(const std::vector<Window>& windows,
                                                 const std::vector<ObservableRecord>& corpus,
                                                 Agent& agent, const PromptSet& prompts,
                                                 const PipelineOptions& options = {});
std::vector<Verdict> run_correlation_stage(const std::vector<EscalationDecision>& escalations,
                                           const std::vector<ObservableRecord>& corpus,
                                           Agent& agent, const PromptSet& prompts,
                                           const PipelineOptions& options,
                                           std::vector<StageFailure>& failures);

PipelineResult run_pipeline(const std::vector<ObservableRecord>& baseline,
                            const std::vector<ObservableRecord>& corpus, int sim_days,
                            Agent& agent, const PromptSet& prompts,
                            const PipelineOptions& options = {});

json to_json(const StageFailure& f);
/// reviewed_actors, baseline_decisions, decisions, verdicts, failures.
json to_json(const PipelineResult& r);
/// Inverse of to_json. Verdicts that do not parse are dropped and described in
/// `dropped` (when given); they count as absent downstream.
PipelineResult result_from_json(const json& j, std::vector<std::string>* dropped = nullptr);

/// Deterministic reference agent over observable data only.
class RuleAgent final : public Agent {
 public:
  std::string invoke(const AgentRequest& request) override;
  std::string model_id() const override { return "rule-agent"; }
};

}  // namespace orgforge
