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

#include "orgforge/idp.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "orgforge/clock.hpp"
#include "orgforge/generate.hpp"

namespace orgforge {
namespace {

GroundTruthRecord labeled(ObservableRecord r, ThreatClass cls, BehaviorKind b) {
  GroundTruthRecord g;
  g.record = std::move(r);
  g.true_positive = true;
  g.threat_class = cls;
  g.behavior = b;
  return g;
}

ObservableRecord off_hours_auth(const Employee& e, int day, int minute, const Device& device,
                                MfaMethod mfa, std::string ip, SourceKind kind, SeededRng& rng) {
  auto r = make_record(e.name, Surface::idp, "idp_auth", day, minute);
  r.application = std::string(rng.pick(std::vector<std::string_view>{
      "okta-dashboard", "github-enterprise", "google-workspace", "salesforce"}));
  r.device_id = device.id;
  r.platform = device.platform;
  r.mfa_method = mfa;
  r.source_ip = std::move(ip);
  r.source_kind = kind;
  r.anomalous_ip = kind != SourceKind::corporate;
  r.new_device = !e.device_profile.knows_device(device.id);
  r.mfa_failed = false;
  r.corroborating_activity_expected = false;
  r.payload = "SSO sign-in to " + *r.application + " via " + std::string(to_string(mfa)) +
              " from " + *r.source_ip;
  return r;
}

}  // namespace

std::vector<GroundTruthRecord> emit_malicious_anomalies(const Employee& subject,
                                                        const ThreatSubjectConfig& config, int day,
                                                        SeededRng rng) {
  if (config.threat_class != ThreatClass::malicious)
    throw std::invalid_argument("emit_malicious_anomalies: subject is not malicious");
  std::vector<GroundTruthRecord> out;
  if (!rng.bernoulli(kMaliciousAnomalyRate)) return out;

  const int minute = wrap_minute(rng.uniform_int(22 * 60, 26 * 60));
  const bool new_device = rng.bernoulli(kMaliciousNewDeviceRate);
  const bool foreign_ip = rng.bernoulli(kMaliciousForeignIpRate);
  const auto& profile = subject.device_profile;

  Device device = rng.pick(profile.devices);
  if (new_device) {
    static constexpr std::array<Platform, 5> kAll{Platform::ios, Platform::android,
                                                  Platform::macos, Platform::windows,
                                                  Platform::linux_};
    device.platform = rng.pick(kAll);
    do device.id = new_device_id(device.platform, rng);
    while (profile.knows_device(device.id));
  }
  std::string ip;
  SourceKind kind = SourceKind::corporate;
  if (foreign_ip) {
    kind = rng.bernoulli(0.5) ? SourceKind::residential : SourceKind::vpn;
    ip = kind == SourceKind::residential ? residential_ip(rng) : vpn_ip(rng);
  } else {
    ip = corporate_ip(profile, rng);
  }
  auto r = off_hours_auth(subject, day, minute, device, rng.pick(profile.mfa_methods),
                          std::move(ip), kind, rng);
  const auto behavior = (r.anomalous_ip || r.new_device) ? BehaviorKind::idp_anomaly
                                                         : BehaviorKind::unusual_hours_access;
  out.push_back(labeled(std::move(r), config.threat_class, behavior));
  return out;
}

std::vector<GroundTruthRecord> emit_disgruntled_ghosts(const Employee& subject,
                                                       const ThreatSubjectConfig& config, int day,
                                                       SeededRng rng) {
  if (config.threat_class != ThreatClass::disgruntled)
    throw std::invalid_argument("emit_disgruntled_ghosts: subject is not disgruntled");
  std::vector<GroundTruthRecord> out;
  if (!rng.bernoulli(kGhostLoginRate)) return out;

  // Uniform over [06:00, 07:00] and [19:00, 21:00] taken together.
  constexpr int kMorning = 61;
  constexpr int kEvening = 121;
  int offset = rng.uniform_int(0, kMorning + kEvening - 1);
  const int minute = offset < kMorning ? 6 * 60 + offset : 19 * 60 + (offset - kMorning);

  const auto& profile = subject.device_profile;
  const Device device = rng.pick(profile.devices);
  const MfaMethod mfa = rng.pick(profile.mfa_methods);
  const std::string ip = corporate_ip(profile, rng);
  auto ghost = off_hours_auth(subject, day, minute, device, mfa, ip, SourceKind::corporate, rng);
  const bool mfa_failure = rng.bernoulli(kGhostMfaFailureRate);
  const int gap = rng.uniform_int(1, 5);
  const auto app = ghost.application;
  out.push_back(labeled(std::move(ghost), config.threat_class, BehaviorKind::unusual_hours_access));

  if (mfa_failure) {
    auto f = off_hours_auth(subject, day, minute + gap, device, mfa, ip, SourceKind::corporate, rng);
    f.event_type = "idp_mfa_failure";
    f.application = app;
    f.mfa_failed = true;
    f.payload = "MFA challenge failed for " + *app + " via " + std::string(to_string(mfa)) +
                " from " + ip;
    out.push_back(labeled(std::move(f), config.threat_class, BehaviorKind::unusual_hours_access));
  }
  return out;
}

std::vector<CorroborationViolation> assert_no_corroboration(
    const std::vector<ObservableRecord>& corpus) {
  std::map<std::string, std::vector<const ObservableRecord*>> activity;
  for (const auto& r : corpus)
    if (r.surface == Surface::slack || r.surface == Surface::jira || r.surface == Surface::email)
      activity[r.actor].push_back(&r);

  std::vector<CorroborationViolation> out;
  for (const auto& auth : corpus) {
    if (auth.corroborating_activity_expected != false) continue;
    auto it = activity.find(auth.actor);
    if (it == activity.end()) continue;
    const auto t0 = SimClock{auth.day, auth.minute}.absolute_minute();
    for (const auto* r : it->second) {
      const auto t = SimClock{r->day, r->minute}.absolute_minute();
      if (t >= t0 && t <= t0 + kCorroborationWindowMinutes)
        out.push_back({auth.record_id, r->record_id, auth.actor});
    }
  }
  return out;
}

}  // namespace orgforge
