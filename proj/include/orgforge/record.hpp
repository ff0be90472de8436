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
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "orgforge/types.hpp"

namespace orgforge {

/// One telemetry event as it appears in the unlabeled stream.
struct ObservableRecord {
  std::string record_id;
  int day = 1;
  int minute = 0;
  std::string actor;
  Surface surface = Surface::telemetry;
  std::string event_type;

  // Structural flags, present on every record.
  bool outside_business_hours = false;
  bool anomalous_ip = false;
  bool new_device = false;
  bool is_external = false;
  bool intrinsically_fatal = false;

  // Flags that only make sense on some surfaces.
  std::optional<bool> sender_in_known_contacts;
  std::optional<bool> preceded_by_call_record;
  std::optional<bool> corroborating_activity_expected;
  std::optional<bool> mfa_failed;

  // Context.
  std::optional<std::string> department;
  std::optional<std::string> counterparty;
  std::optional<std::string> resource_department;
  std::optional<std::string> application;
  std::optional<std::string> device_id;
  std::optional<Platform> platform;
  std::optional<MfaMethod> mfa_method;
  std::optional<std::string> source_ip;
  std::optional<SourceKind> source_kind;
  std::optional<std::string> recipient_domain;
  std::optional<std::string> reply_to_domain;
  std::optional<int> call_duration_seconds;

  // Scenario fields.
  std::optional<int> call_to_auth_gap_minutes;
  std::optional<int> hoarding_trail_start_day;
  std::optional<int> hoarding_phase;
  std::optional<int> followup_due_day;
  std::optional<int> clone_count;
  std::optional<int> file_count;
  std::optional<int> total_megabytes;
  std::optional<ArchiveTool> archive_tool;
  std::optional<Destination> destination;

  std::string payload;

  friend bool operator==(const ObservableRecord&, const ObservableRecord&) = default;
};

/// Ledger entry: the observable record plus held-out labels.
struct GroundTruthRecord {
  ObservableRecord record;
  bool true_positive = false;
  std::optional<ThreatClass> threat_class;
  std::optional<BehaviorKind> behavior;
  /// Set when the record is filed under someone other than the subject who caused it.
  std::optional<std::string> attacker_actor;

  /// The subject a true-positive record is attributed to.
  const std::string& responsible_actor() const noexcept {
    return attacker_actor ? *attacker_actor : record.actor;
  }

  friend bool operator==(const GroundTruthRecord&, const GroundTruthRecord&) = default;
};

/// Label keys that must never appear in an observable stream.
inline constexpr std::array<std::string_view, 5> kLabelKeys{
    "true_positive", "threat_class", "behavior", "attacker_actor", "is_subject"};

using FieldValue = std::variant<bool, std::int64_t, std::string>;

enum class FieldKind { boolean, integer, text };
enum class FieldGroup { envelope, flag, context, scenario, payload };

/// Describes one serialized record field. Every encoder walks this table so the
/// four formats cannot drift apart.
struct FieldSpec {
  std::string_view key;
  FieldKind kind;
  FieldGroup group;
  bool always_present;
  std::function<std::optional<FieldValue>(const ObservableRecord&)> get;
  std::function<void(ObservableRecord&, const FieldValue&)> set;
};

const std::vector<FieldSpec>& record_fields();
const FieldSpec* find_field(std::string_view key);

/// Present fields in canonical order.
std::vector<std::pair<std::string_view, FieldValue>> record_to_fields(const ObservableRecord& r);

/// Throws FormatError for unknown keys or a value of the wrong kind.
void set_record_field(ObservableRecord& r, std::string_view key, const FieldValue& value);

/// Everything except the prose payload, rendered as "key=value" strings.
/// Two records agree on this iff their structural content is identical.
std::vector<std::string> structural_tuple(const ObservableRecord& r);

std::string field_value_text(const FieldValue& v);

}  // namespace orgforge
