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

#include <string>
#include <vector>

#include "orgforge/config.hpp"
#include "orgforge/org.hpp"
#include "orgforge/record.hpp"
#include "orgforge/rng.hpp"

namespace orgforge {

inline constexpr double kMaliciousAnomalyRate = 0.45;
inline constexpr double kMaliciousNewDeviceRate = 0.20;
inline constexpr double kMaliciousForeignIpRate = 0.30;
inline constexpr double kGhostLoginRate = 0.30;
inline constexpr double kGhostMfaFailureRate = 0.15;

/// Off-hours authentication in [22:00, 02:00] on a fraction of active days.
/// Times past midnight stay on the firing day. Requires a malicious subject.
std::vector<GroundTruthRecord> emit_malicious_anomalies(const Employee& subject,
                                                        const ThreatSubjectConfig& config, int day,
                                                        SeededRng rng);

/// Early-morning or evening sign-ins from the subject's own device and network,
/// sometimes followed by a separate MFA-failure event. Requires a disgruntled subject.
std::vector<GroundTruthRecord> emit_disgruntled_ghosts(const Employee& subject,
                                                       const ThreatSubjectConfig& config, int day,
                                                       SeededRng rng);

struct CorroborationViolation {
  std::string auth_record_id;
  std::string activity_record_id;
  std::string actor;
};

/// Every authentication marked corroborating_activity_expected=false must have no
/// Slack/JIRA/email record by the same actor within the corroboration window after it.
std::vector<CorroborationViolation> assert_no_corroboration(
    const std::vector<ObservableRecord>& corpus);

}  // namespace orgforge
