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
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "orgforge/pipeline.hpp"
#include "orgforge/record.hpp"
#include "orgforge/types.hpp"

namespace orgforge {

struct SubjectTruth {
  ThreatClass threat_class = ThreatClass::negligent;
  int onset_day = 1;
  std::set<BehaviorKind> behaviors;
};

/// One vishing instance: the attacker's call and the victim-side session it led to.
struct VishingInstance {
  std::string attacker;
  std::string victim;
  std::string call_record_id;
  std::string auth_record_id;
};

struct HoardingTrail {
  std::string actor;
  int start_day = 1;
  std::vector<std::string> phase_record_ids;  // phases 1, 2, 3
};

struct GroundTruth {
  std::map<std::string, SubjectTruth> subjects;
  std::set<std::string> innocents;
  std::vector<VishingInstance> vishing;
  std::vector<HoardingTrail> trails;
};

/// Builds the scoring view of a ledger. `onsets` supplies configured onset days;
/// a subject missing from it falls back to the day of its first labeled record.
/// `population` adds employees that have no ledger records.
GroundTruth build_ground_truth(const std::vector<GroundTruthRecord>& ledger,
                               const std::map<std::string, int>& onsets = {},
                               const std::vector<std::string>& population = {});

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  int tp = 0;
  int fp = 0;
  int fn = 0;
};

/// P/R/F1 with 0 for every undefined ratio.
Prf make_prf(int tp, int fp, int fn);

/// Report-side rounding: 3 decimals, half-up.
double round3(double x);

struct ScoreOptions {
  /// Subjects of other classes are left out of every metric (neither positive nor innocent).
  std::set<ThreatClass> scored_classes{ThreatClass::disgruntled, ThreatClass::malicious};
  bool semantic_track = false;
};

/// Actors whose class is in scope.
std::set<std::string> scored_subjects(const GroundTruth& truth, const ScoreOptions& options);

Prf score_triage(const std::vector<EscalationDecision>& decisions, const GroundTruth& truth,
                 const ScoreOptions& options = {});

struct BaselineFp {
  int flagged = 0;
  int innocents = 0;
  double rate = 0.0;
};

/// Distinct innocents flagged in Stage 1 over the innocents reviewed. With no
/// `reviewed` list every innocent in the ground truth counts as reviewed.
BaselineFp baseline_fp_rate(const std::vector<EscalationDecision>& baseline_decisions,
                            const GroundTruth& truth,
                            const std::vector<std::string>& reviewed = {});

/// Fraction of scored subjects escalated in a window that ends before their onset.
double onset_sensitivity(const std::vector<EscalationDecision>& decisions,
                         const GroundTruth& truth, const ScoreOptions& options = {});

Prf score_verdicts(const std::vector<Verdict>& verdicts, const GroundTruth& truth,
                   const ScoreOptions& options = {});

struct CapabilityFlags {
  bool vishing_detected = false;
  bool host_trail_reconstructed = false;
};
CapabilityFlags capability_flags(const std::vector<Verdict>& verdicts, const GroundTruth& truth);

struct BehaviorTally {
  int tp = 0;
  int fp = 0;
  friend bool operator==(const BehaviorTally&, const BehaviorTally&) = default;
};

/// Exact-match credit per taxonomy behavior. Counts distinct (actor, label) pairs.
std::map<BehaviorKind, BehaviorTally> per_behavior_breakdown(const std::vector<Verdict>& verdicts,
                                                             const GroundTruth& truth);

/// Labels that are not taxonomy names; they earn nothing on the exact-match track.
std::vector<std::string> unscored_labels(const std::vector<Verdict>& verdicts);

/// Maps a free-form behavior label to its closest taxonomy intent.
class SemanticMatcher {
 public:
  virtual ~SemanticMatcher() = default;
  virtual std::optional<std::pair<BehaviorKind, double>> match(const std::string& label) const = 0;
};

/// Token overlap against per-behavior synonym lists: score is the share of the
/// label's content tokens found in a behavior's list.
class TokenOverlapMatcher final : public SemanticMatcher {
 public:
  TokenOverlapMatcher();
  /// JSON object: behavior name -> list of synonym tokens.
  static TokenOverlapMatcher from_json(const json& j);
  std::optional<std::pair<BehaviorKind, double>> match(const std::string& label) const override;
  double threshold() const noexcept { return threshold_; }

 private:
  std::map<BehaviorKind, std::set<std::string>> synonyms_;
  double threshold_ = 0.5;
};

/// Label tokens with separators split and stop words removed.
std::vector<std::string> label_tokens(const std::string& label);

struct SemanticEntry {
  std::string employee;
  std::string label;
  std::optional<BehaviorKind> matched;
  double similarity = 0.0;
  bool credited = false;
};

std::vector<SemanticEntry> semantic_track(const std::vector<Verdict>& verdicts,
                                          const GroundTruth& truth,
                                          const SemanticMatcher& matcher);

struct ClassOutcome {
  int subjects = 0;
  int escalated = 0;
  int positive_verdicts = 0;
  bool scored = false;
};

struct ScoreReport {
  Prf triage;
  Prf verdict;
  BaselineFp baseline;
  double onset_sensitivity = 0.0;
  CapabilityFlags flags;
  std::map<BehaviorKind, BehaviorTally> per_behavior;
  std::map<ThreatClass, ClassOutcome> per_class;
  std::vector<std::string> unscored_labels;
  std::set<ThreatClass> scored_classes;
  std::optional<std::vector<SemanticEntry>> semantic;
};

/// Throws ScoringError when the ground truth has no subjects or no innocents.
ScoreReport score_run(const PipelineResult& run, const GroundTruth& truth,
                      const ScoreOptions& options = {},
                      const SemanticMatcher* matcher = nullptr);

/// Rounded to 3 decimals for presentation.
json to_json(const ScoreReport& report);

}  // namespace orgforge
