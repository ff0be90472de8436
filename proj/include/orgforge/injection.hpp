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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "orgforge/config.hpp"
#include "orgforge/generate.hpp"
#include "orgforge/org.hpp"
#include "orgforge/record.hpp"
#include "orgforge/rng.hpp"

namespace orgforge {

/// Empty before onset; the configured set from onset on.
std::vector<BehaviorKind> active_behaviors(const ThreatSubjectConfig& subject, int day);

enum class CredentialKind { aws_key, github_token, db_password };

/// Every synthetic credential carries this marker, so none can collide with a live secret.
inline constexpr std::string_view kSyntheticMarker = "SYNTH";

std::string synthetic_credential(CredentialKind kind, SeededRng& rng);
/// Shape of the bare credential value for `kind` (no env-var name).
bool matches_credential_shape(CredentialKind kind, std::string_view value);
/// All synthetic credential values embedded in `text`.
std::vector<std::string> find_synthetic_credentials(std::string_view text);

/// One labeled injection, before ids are assigned.
using Injected = std::vector<GroundTruthRecord>;

Injected fire_secret_in_commit(const GenContext& ctx, const Employee& subject,
                               const ThreatSubjectConfig& config, int day, SeededRng rng);
Injected fire_secret_in_commit(const GenContext& ctx, const Employee& subject,
                               const ThreatSubjectConfig& config, int day, SeededRng rng,
                               CredentialKind kind);

/// Innocuous Slack post in [01:00, 03:00] or [22:00, 23:00].
Injected fire_unusual_hours(const GenContext& ctx, const Employee& subject,
                            const ThreatSubjectConfig& config, int day, SeededRng rng);

inline constexpr int kCloneBurstMin = 25;
inline constexpr int kCloneBurstMax = 60;
Injected fire_repo_cloning(const GenContext& ctx, const Employee& subject,
                           const ThreatSubjectConfig& config, int day, SeededRng rng);

/// Class-conditioned rewrite of a base message. Empty input is returned unchanged.
std::string fire_sentiment_drift(ThreatClass cls, const std::string& base_message, SeededRng& rng);
/// Neutral rewrite: drops exclamation marks, emoji, and sentiment-lexicon words.
std::string affect_strip(std::string_view text);
/// Number of sentiment-lexicon words and emoji in `text`.
int sentiment_hits(std::string_view text);
bool contains_passive_aggressive(std::string_view text);
/// Slack post whose prose went through fire_sentiment_drift.
Injected fire_sentiment_post(const GenContext& ctx, const Employee& subject,
                             const ThreatSubjectConfig& config, int day, SeededRng rng);

Injected fire_cross_dept_snooping(const GenContext& ctx, const Employee& subject,
                                  const ThreatSubjectConfig& config, int day, SeededRng rng);

Injected fire_data_exfil_email(const GenContext& ctx, const Employee& subject,
                               const ThreatSubjectConfig& config, int day, SeededRng rng);

/// Three host records on start_day, +1, +2. Empty (with a warning) if they do not fit.
Injected schedule_host_hoarding(const GenContext& ctx, const Employee& subject,
                                const ThreatSubjectConfig& config, int start_day, SeededRng rng);

/// Trail start days for a subject: weekdays on or after onset with room for all three phases.
std::vector<int> plan_hoarding_trails(const OrgState& org, const ThreatSubjectConfig& config,
                                      SeededRng rng);

SocialEngineeringPattern select_pattern(SeededRng& rng);

/// Work the social-engineering generator owes to later days.
struct SocialEngineeringBacklog {
  struct Pending {
    std::size_t subject;  // employee index
    int origin_day;
    int due_day;          // 0 for pretexts waiting on an incident
    std::string target;
  };
  std::vector<Pending> pretexts;
  std::vector<Pending> followups;
};

Injected fire_social_engineering(const GenContext& ctx, std::size_t subject,
                                 const ThreatSubjectConfig& config, int day, SeededRng rng,
                                 SocialEngineeringBacklog& backlog);
/// Forces a pattern instead of drawing one.
Injected fire_social_engineering(const GenContext& ctx, std::size_t subject,
                                 const ThreatSubjectConfig& config, int day, SeededRng rng,
                                 SocialEngineeringBacklog& backlog,
                                 SocialEngineeringPattern pattern);

/// Deferred pretexts (on incident days) and trust-building follow-ups due today.
Injected release_backlog(const GenContext& ctx, int day, SocialEngineeringBacklog& backlog);

}  // namespace orgforge
