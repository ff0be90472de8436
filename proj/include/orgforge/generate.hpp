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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "orgforge/clock.hpp"
#include "orgforge/org.hpp"
#include "orgforge/prose.hpp"
#include "orgforge/record.hpp"
#include "orgforge/rng.hpp"

namespace orgforge {

/// Minutes after an uncorroborated authentication in which the same actor must
/// show no Slack, JIRA, or email activity.
inline constexpr int kCorroborationWindowMinutes = 60;
inline constexpr double kWeekendPresence = 0.30;
inline constexpr const char* kInternalDomain = "orgforge.example";

/// Per-actor absolute-minute intervals that collaboration records must avoid.
class QuietWindows {
 public:
  void reserve(const std::string& actor, int day, int minute,
               int length = kCorroborationWindowMinutes);
  bool blocked(const std::string& actor, int day, int minute) const;

 private:
  std::map<std::string, std::vector<std::pair<std::int64_t, std::int64_t>>> windows_;
};

/// Everything a generator may read, plus the two sinks it may write.
struct GenContext {
  const OrgState& org;
  const ProseRenderer& renderer;
  QuietWindows& quiet;
  std::vector<std::string>& warnings;
};

/// A record skeleton with envelope fields and the hour flag set.
ObservableRecord make_record(const std::string& actor, Surface surface, std::string event_type,
                             int day, int minute);

/// Uniform minute in [lo, hi] (values past midnight wrap) that avoids the actor's
/// quiet windows. Empty when the whole range is blocked.
std::optional<int> place_minute(const QuietWindows& quiet, const std::string& actor, int day,
                                int lo, int hi, SeededRng& rng);

/// Weekdays always; weekends with fixed probability, drawn from a per-(employee, day) stream.
bool is_active(const OrgState& org, std::size_t employee, int day);

std::string render(const GenContext& ctx, ProseSurface surface, const std::string& actor,
                   std::string intent, std::map<std::string, std::string> slots,
                   std::vector<std::string> embeds, SeededRng& rng);

std::string email_address(const std::string& name);
std::string personal_address(const std::string& name, std::string_view domain, SeededRng& rng);

/// Benign activity for every active employee: IDP authentications plus
/// Slack/JIRA/email/PR records. Carries no labels.
std::vector<ObservableRecord> generate_baseline_day(const GenContext& ctx, int day,
                                                    const SeededRng& rng);

/// Benign DLP-style telemetry. Expected count per employee-day is
/// dlp_noise_ratio times that employee's collaboration record count.
std::vector<ObservableRecord> emit_dlp_noise(const GenContext& ctx, int day, const SeededRng& rng,
                                             const std::vector<ObservableRecord>& day_activity);

/// Benign IDP authentications for one employee-day (1 to 3 events).
std::vector<ObservableRecord> benign_idp_day(const Employee& e, int day, SeededRng rng);

}  // namespace orgforge
