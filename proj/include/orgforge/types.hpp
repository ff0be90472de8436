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

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "orgforge/errors.hpp"

namespace orgforge {

enum class Surface { idp, slack, jira, email, pr, host, telemetry, phone };
enum class ThreatClass { negligent, disgruntled, malicious };

/// The canonical behavior taxonomy. Exact-match scoring compares against these names.
enum class BehaviorKind {
  secret_in_commit,
  unusual_hours_access,
  excessive_repo_cloning,
  sentiment_drift,
  cross_dept_snooping,
  data_exfil_email,
  host_data_hoarding,
  social_engineering,
  idp_anomaly,
};

enum class Platform { ios, android, macos, windows, linux_ };
enum class MfaMethod { push, sms, totp };
enum class SourceKind { corporate, residential, vpn };
enum class ArchiveTool { sevenzip, winrar, tar, zip };
enum class Destination { dropbox, google_drive, onedrive, removable_media };
enum class SocialEngineeringPattern { spear_phishing, slack_pretexting, vishing, trust_building };
enum class LogFormat { jsonl, cef, ecs, leef, all };

template <typename E>
struct EnumNames;

#define ORGFORGE_ENUM_NAMES(E, N, ...)                                      \
  template <>                                                               \
  struct EnumNames<E> {                                                     \
    static constexpr std::string_view type_name = #E;                       \
    static constexpr std::array<std::pair<E, std::string_view>, N> table{{ \
        __VA_ARGS__}};                                                      \
  }

ORGFORGE_ENUM_NAMES(Surface, 8, {Surface::idp, "idp"}, {Surface::slack, "slack"},
                    {Surface::jira, "jira"}, {Surface::email, "email"}, {Surface::pr, "pr"},
                    {Surface::host, "host"}, {Surface::telemetry, "telemetry"},
                    {Surface::phone, "phone"});
ORGFORGE_ENUM_NAMES(ThreatClass, 3, {ThreatClass::negligent, "negligent"},
                    {ThreatClass::disgruntled, "disgruntled"},
                    {ThreatClass::malicious, "malicious"});
ORGFORGE_ENUM_NAMES(BehaviorKind, 9, {BehaviorKind::secret_in_commit, "secret_in_commit"},
                    {BehaviorKind::unusual_hours_access, "unusual_hours_access"},
                    {BehaviorKind::excessive_repo_cloning, "excessive_repo_cloning"},
                    {BehaviorKind::sentiment_drift, "sentiment_drift"},
                    {BehaviorKind::cross_dept_snooping, "cross_dept_snooping"},
                    {BehaviorKind::data_exfil_email, "data_exfil_email"},
                    {BehaviorKind::host_data_hoarding, "host_data_hoarding"},
                    {BehaviorKind::social_engineering, "social_engineering"},
                    {BehaviorKind::idp_anomaly, "idp_anomaly"});
ORGFORGE_ENUM_NAMES(Platform, 5, {Platform::ios, "ios"}, {Platform::android, "android"},
                    {Platform::macos, "macos"}, {Platform::windows, "windows"},
                    {Platform::linux_, "linux"});
ORGFORGE_ENUM_NAMES(MfaMethod, 3, {MfaMethod::push, "push"}, {MfaMethod::sms, "sms"},
                    {MfaMethod::totp, "totp"});
ORGFORGE_ENUM_NAMES(SourceKind, 3, {SourceKind::corporate, "corporate"},
                    {SourceKind::residential, "residential"}, {SourceKind::vpn, "vpn"});
ORGFORGE_ENUM_NAMES(ArchiveTool, 4, {ArchiveTool::sevenzip, "7z"}, {ArchiveTool::winrar, "winrar"},
                    {ArchiveTool::tar, "tar"}, {ArchiveTool::zip, "zip"});
ORGFORGE_ENUM_NAMES(Destination, 4, {Destination::dropbox, "dropbox"},
                    {Destination::google_drive, "google_drive"},
                    {Destination::onedrive, "onedrive"},
                    {Destination::removable_media, "removable_media"});
ORGFORGE_ENUM_NAMES(SocialEngineeringPattern, 4,
                    {SocialEngineeringPattern::spear_phishing, "spear_phishing"},
                    {SocialEngineeringPattern::slack_pretexting, "slack_pretexting"},
                    {SocialEngineeringPattern::vishing, "vishing"},
                    {SocialEngineeringPattern::trust_building, "trust_building"});
ORGFORGE_ENUM_NAMES(LogFormat, 5, {LogFormat::jsonl, "jsonl"}, {LogFormat::cef, "cef"},
                    {LogFormat::ecs, "ecs"}, {LogFormat::leef, "leef"}, {LogFormat::all, "all"});

#undef ORGFORGE_ENUM_NAMES

template <typename E>
constexpr std::string_view to_string(E value) noexcept {
  for (const auto& [v, name] : EnumNames<E>::table) {
    if (v == value) return name;
  }
  return "?";
}

template <typename E>
constexpr std::optional<E> parse_enum(std::string_view text) noexcept {
  for (const auto& [v, name] : EnumNames<E>::table) {
    if (name == text) return v;
  }
  return std::nullopt;
}

/// Like parse_enum, but throws FormatError naming the enum type.
template <typename E>
E parse_enum_or_throw(std::string_view text) {
  if (auto v = parse_enum<E>(text)) return *v;
  throw FormatError("unknown " + std::string(EnumNames<E>::type_name) + " value '" +
                    std::string(text) + "'");
}

template <typename E>
constexpr auto all_values() noexcept {
  std::array<E, EnumNames<E>::table.size()> out{};
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = EnumNames<E>::table[i].first;
  return out;
}

inline constexpr auto kAllBehaviors = all_values<BehaviorKind>();

}  // namespace orgforge
