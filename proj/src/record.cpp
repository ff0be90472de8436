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

#include "orgforge/record.hpp"

#include <algorithm>

namespace orgforge {
namespace {

template <typename T>
T expect(const FieldValue& v, std::string_view key) {
  if (const T* p = std::get_if<T>(&v)) return *p;
  throw FormatError("field '" + std::string(key) + "' has the wrong type");
}

using Rec = ObservableRecord;

FieldSpec text_field(std::string_view key, FieldGroup group, std::string Rec::*member) {
  return {key, FieldKind::text, group, true,
          [member](const Rec& r) -> std::optional<FieldValue> { return FieldValue{r.*member}; },
          [member, key](Rec& r, const FieldValue& v) { r.*member = expect<std::string>(v, key); }};
}

FieldSpec int_field(std::string_view key, FieldGroup group, int Rec::*member) {
  return {key, FieldKind::integer, group, true,
          [member](const Rec& r) -> std::optional<FieldValue> {
            return FieldValue{static_cast<std::int64_t>(r.*member)};
          },
          [member, key](Rec& r, const FieldValue& v) {
            r.*member = static_cast<int>(expect<std::int64_t>(v, key));
          }};
}

FieldSpec flag_field(std::string_view key, bool Rec::*member) {
  return {key, FieldKind::boolean, FieldGroup::flag, true,
          [member](const Rec& r) -> std::optional<FieldValue> { return FieldValue{r.*member}; },
          [member, key](Rec& r, const FieldValue& v) { r.*member = expect<bool>(v, key); }};
}

FieldSpec opt_flag(std::string_view key, std::optional<bool> Rec::*member) {
  return {key, FieldKind::boolean, FieldGroup::flag, false,
          [member](const Rec& r) -> std::optional<FieldValue> {
            if (!(r.*member)) return std::nullopt;
            return FieldValue{*(r.*member)};
          },
          [member, key](Rec& r, const FieldValue& v) { r.*member = expect<bool>(v, key); }};
}

FieldSpec opt_text(std::string_view key, FieldGroup group, std::optional<std::string> Rec::*member) {
  return {key, FieldKind::text, group, false,
          [member](const Rec& r) -> std::optional<FieldValue> {
            if (!(r.*member)) return std::nullopt;
            return FieldValue{*(r.*member)};
          },
          [member, key](Rec& r, const FieldValue& v) { r.*member = expect<std::string>(v, key); }};
}

FieldSpec opt_int(std::string_view key, FieldGroup group, std::optional<int> Rec::*member) {
  return {key, FieldKind::integer, group, false,
          [member](const Rec& r) -> std::optional<FieldValue> {
            if (!(r.*member)) return std::nullopt;
            return FieldValue{static_cast<std::int64_t>(*(r.*member))};
          },
          [member, key](Rec& r, const FieldValue& v) {
            r.*member = static_cast<int>(expect<std::int64_t>(v, key));
          }};
}

template <typename E>
FieldSpec opt_enum(std::string_view key, FieldGroup group, std::optional<E> Rec::*member) {
  return {key, FieldKind::text, group, false,
          [member](const Rec& r) -> std::optional<FieldValue> {
            if (!(r.*member)) return std::nullopt;
            return FieldValue{std::string(to_string(*(r.*member)))};
          },
          [member, key](Rec& r, const FieldValue& v) {
            r.*member = parse_enum_or_throw<E>(expect<std::string>(v, key));
          }};
}

std::vector<FieldSpec> build_fields() {
  using G = FieldGroup;
  std::vector<FieldSpec> f;
  f.push_back(text_field("record_id", G::envelope, &Rec::record_id));
  f.push_back(int_field("day", G::envelope, &Rec::day));
  f.push_back(int_field("minute", G::envelope, &Rec::minute));
  f.push_back(text_field("actor", G::envelope, &Rec::actor));
  f.push_back({"surface", FieldKind::text, G::envelope, true,
               [](const Rec& r) -> std::optional<FieldValue> {
                 return FieldValue{std::string(to_string(r.surface))};
               },
               [](Rec& r, const FieldValue& v) {
                 r.surface = parse_enum_or_throw<Surface>(expect<std::string>(v, "surface"));
               }});
  f.push_back(text_field("event_type", G::envelope, &Rec::event_type));

  f.push_back(flag_field("outside_business_hours", &Rec::outside_business_hours));
  f.push_back(flag_field("anomalous_ip", &Rec::anomalous_ip));
  f.push_back(flag_field("new_device", &Rec::new_device));
  f.push_back(flag_field("is_external", &Rec::is_external));
  f.push_back(flag_field("intrinsically_fatal", &Rec::intrinsically_fatal));
  f.push_back(opt_flag("sender_in_known_contacts", &Rec::sender_in_known_contacts));
  f.push_back(opt_flag("preceded_by_call_record", &Rec::preceded_by_call_record));
  f.push_back(opt_flag("corroborating_activity_expected", &Rec::corroborating_activity_expected));
  f.push_back(opt_flag("mfa_failed", &Rec::mfa_failed));

  f.push_back(opt_text("department", G::context, &Rec::department));
  f.push_back(opt_text("counterparty", G::context, &Rec::counterparty));
  f.push_back(opt_text("resource_department", G::context, &Rec::resource_department));
  f.push_back(opt_text("application", G::context, &Rec::application));
  f.push_back(opt_text("device_id", G::context, &Rec::device_id));
  f.push_back(opt_enum<Platform>("platform", G::context, &Rec::platform));
  f.push_back(opt_enum<MfaMethod>("mfa_method", G::context, &Rec::mfa_method));
  f.push_back(opt_text("source_ip", G::context, &Rec::source_ip));
  f.push_back(opt_enum<SourceKind>("source_kind", G::context, &Rec::source_kind));
  f.push_back(opt_text("recipient_domain", G::context, &Rec::recipient_domain));
  f.push_back(opt_text("reply_to_domain", G::context, &Rec::reply_to_domain));
  f.push_back(opt_int("call_duration_seconds", G::context, &Rec::call_duration_seconds));

  f.push_back(opt_int("call_to_auth_gap_minutes", G::scenario, &Rec::call_to_auth_gap_minutes));
  f.push_back(opt_int("hoarding_trail_start_day", G::scenario, &Rec::hoarding_trail_start_day));
  f.push_back(opt_int("hoarding_phase", G::scenario, &Rec::hoarding_phase));
  f.push_back(opt_int("followup_due_day", G::scenario, &Rec::followup_due_day));
  f.push_back(opt_int("clone_count", G::scenario, &Rec::clone_count));
  f.push_back(opt_int("file_count", G::scenario, &Rec::file_count));
  f.push_back(opt_int("total_megabytes", G::scenario, &Rec::total_megabytes));
  f.push_back(opt_enum<ArchiveTool>("archive_tool", G::scenario, &Rec::archive_tool));
  f.push_back(opt_enum<Destination>("destination", G::scenario, &Rec::destination));

  f.push_back(text_field("payload", G::payload, &Rec::payload));
  return f;
}

}  // namespace

const std::vector<FieldSpec>& record_fields() {
  static const std::vector<FieldSpec> fields = build_fields();
  return fields;
}

const FieldSpec* find_field(std::string_view key) {
  const auto& fields = record_fields();
  auto it = std::find_if(fields.begin(), fields.end(),
                         [key](const FieldSpec& f) { return f.key == key; });
  return it == fields.end() ? nullptr : &*it;
}

std::vector<std::pair<std::string_view, FieldValue>> record_to_fields(const ObservableRecord& r) {
  std::vector<std::pair<std::string_view, FieldValue>> out;
  for (const auto& spec : record_fields()) {
    if (auto v = spec.get(r)) out.emplace_back(spec.key, std::move(*v));
  }
  return out;
}

void set_record_field(ObservableRecord& r, std::string_view key, const FieldValue& value) {
  const FieldSpec* spec = find_field(key);
  if (!spec) throw FormatError("unknown record field '" + std::string(key) + "'");
  spec->set(r, value);
}

std::string field_value_text(const FieldValue& v) {
  if (const bool* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  if (const std::int64_t* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  return std::get<std::string>(v);
}

std::vector<std::string> structural_tuple(const ObservableRecord& r) {
  std::vector<std::string> out;
  for (const auto& [key, value] : record_to_fields(r)) {
    if (key == "payload") continue;
    out.push_back(std::string(key) + "=" + field_value_text(value));
  }
  return out;
}

}  // namespace orgforge
