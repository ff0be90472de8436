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
#include <string_view>
#include <vector>

#include "orgforge/types.hpp"

namespace orgforge {

struct ThreatSubjectConfig {
  std::string name;
  ThreatClass threat_class = ThreatClass::negligent;
  int onset_day = 1;
  std::vector<BehaviorKind> behaviors;

  bool has(BehaviorKind b) const noexcept {
    for (auto x : behaviors)
      if (x == b) return true;
    return false;
  }
};

struct SimConfig {
  int sim_days = 51;
  std::vector<ThreatSubjectConfig> subjects;
  double dlp_noise_ratio = 0.40;
  bool idp_logs = true;
  LogFormat log_format = LogFormat::jsonl;
  std::uint64_t seed = 0;
  int population_size = 51;

  /// Per-active-day firing probability for behaviors without a dedicated rate.
  double firing_probability = 0.35;
  std::map<BehaviorKind, double> behavior_probabilities;
  int hoarding_trails = 1;
  /// Pins the vishing victim; seeded-uniform over innocents when unset.
  std::optional<std::string> vishing_victim;
  /// Probability that a weekday carries an active incident.
  double incident_rate = 0.10;

  std::size_t subject_count() const noexcept { return subjects.size(); }
  double probability_for(BehaviorKind b) const {
    auto it = behavior_probabilities.find(b);
    return it == behavior_probabilities.end() ? firing_probability : it->second;
  }
};

/// Throws ConfigError naming the first violated field.
void validate(const SimConfig& config);

/// Parses a YAML (or JSON) document. Unknown keys are rejected. Validates.
SimConfig parse_config(std::string_view text);
SimConfig load_config(const std::string& path);

/// Canonical JSON rendering, stable across runs. Used for manifests and digests.
std::string config_to_json(const SimConfig& config);

/// Reference roster: 51 days, 51 employees, noise ratio 0.40.
SimConfig reference_config(std::uint64_t seed = 7);

}  // namespace orgforge
