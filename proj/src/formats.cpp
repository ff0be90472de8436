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

#include "orgforge/formats.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>

#include "orgforge/clock.hpp"
#include "orgforge/errors.hpp"

namespace orgforge {
namespace {

using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr std::string_view kVendor = "OrgForge";
constexpr std::string_view kProduct = "OrgForge-IT";

// Fields with a native key in CEF; everything else uses the field name.
const std::map<std::string_view, std::string_view>& cef_native() {
  static const std::map<std::string_view, std::string_view> m{
      {"record_id", "externalId"}, {"actor", "suser"}, {"event_type", "act"},
      {"surface", "cat"},          {"source_ip", "src"}, {"payload", "msg"},
  };
  return m;
}

const std::map<std::string_view, std::string_view>& leef_native() {
  static const std::map<std::string_view, std::string_view> m{
      {"actor", "usrName"}, {"source_ip", "src"}, {"surface", "cat"}};
  return m;
}

std::string_view native_or_self(const std::map<std::string_view, std::string_view>& m,
                                std::string_view key) {
  auto it = m.find(key);
  return it == m.end() ? key : it->second;
}

std::string_view field_for(const std::map<std::string_view, std::string_view>& m,
                           std::string_view key) {
  for (const auto& [field, native] : m)
    if (native == key) return field;
  return key;
}

std::int64_t epoch_millis(int day, int minute) {
  using namespace std::chrono;
  const sys_days epoch = year{2025} / January / 6;
  const auto t = epoch + days{day - 1} + minutes{minute};
  return duration_cast<milliseconds>(t.time_since_epoch()).count();
}

std::pair<int, int> from_epoch_millis(std::int64_t ms) {
  using namespace std::chrono;
  const sys_days epoch = year{2025} / January / 6;
  const auto base = duration_cast<milliseconds>(epoch.time_since_epoch()).count();
  const auto total_minutes = (ms - base) / 60000;
  if ((ms - base) % 60000 != 0 || total_minutes < 0)
    throw FormatError("timestamp is not on a sim minute boundary");
  return {static_cast<int>(total_minutes / kMinutesPerDay) + 1,
          static_cast<int>(total_minutes % kMinutesPerDay)};
}

FieldValue value_from_text(const FieldSpec& spec, const std::string& text) {
  switch (spec.kind) {
    case FieldKind::boolean:
      if (text == "true") return true;
      if (text == "false") return false;
      throw FormatError("field '" + std::string(spec.key) + "' expects true/false");
    case FieldKind::integer:
      try {
        std::size_t used = 0;
        auto v = std::stoll(text, &used);
        if (used != text.size()) throw std::invalid_argument("trailing");
        return static_cast<std::int64_t>(v);
      } catch (const std::logic_error&) {
        throw FormatError("field '" + std::string(spec.key) + "' expects an integer");
      }
    case FieldKind::text: return text;
  }
  return text;
}

FieldValue value_from_json(const FieldSpec& spec, const ojson& v) {
  switch (spec.kind) {
    case FieldKind::boolean:
      if (!v.is_boolean()) break;
      return v.get<bool>();
    case FieldKind::integer:
      if (!v.is_number_integer()) break;
      return v.get<std::int64_t>();
    case FieldKind::text:
      if (!v.is_string()) break;
      return v.get<std::string>();
  }
  throw FormatError("field '" + std::string(spec.key) + "' has the wrong JSON type");
}

ojson value_to_json(const FieldValue& v) {
  if (auto b = std::get_if<bool>(&v)) return *b;
  if (auto i = std::get_if<std::int64_t>(&v)) return *i;
  return std::get<std::string>(v);
}

ojson parse_json(std::string_view line) {
  try {
    return ojson::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
}

void set_from_json(ObservableRecord& r, const std::string& key, const ojson& v) {
  const FieldSpec* spec = find_field(key);
  if (!spec) throw FormatError("unknown record field '" + key + "'");
  spec->set(r, value_from_json(*spec, v));
}

void require_envelope(const std::vector<std::string>& seen) {
  for (const auto& spec : record_fields()) {
    if (!spec.always_present) continue;
    if (std::find(seen.begin(), seen.end(), spec.key) == seen.end())
      throw FormatError("missing required field '" + std::string(spec.key) + "'");
  }
}

ObservableRecord from_json_object(const ojson& j, std::vector<std::string>* seen_out = nullptr) {
  if (!j.is_object()) throw FormatError("record must be a JSON object");
  ObservableRecord r;
  std::vector<std::string> seen;
  for (const auto& [key, value] : j.items()) {
    set_from_json(r, key, value);
    seen.push_back(key);
  }
  if (seen_out) *seen_out = seen;
  require_envelope(seen);
  return r;
}

ojson to_json_object(const ObservableRecord& r) {
  ojson j = ojson::object();
  for (const auto& [key, value] : record_to_fields(r)) j[std::string(key)] = value_to_json(value);
  return j;
}

/// Splits on `sep` not preceded by an escaping backslash; stops after `max_parts - 1` splits.
std::vector<std::string> split_unescaped(std::string_view s, char sep, std::size_t max_parts,
                                         std::size_t* rest_offset) {
  std::vector<std::string> out;
  std::string cur;
  std::size_t i = 0;
  for (; i < s.size() && out.size() + 1 < max_parts; ++i) {
    char c = s[i];
    if (c == '\\' && i + 1 < s.size()) {
      cur.push_back(c);
      cur.push_back(s[++i]);
    } else if (c == sep) {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(std::move(cur));
  if (rest_offset) *rest_offset = i;
  return out;
}

std::string unescape_header(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && i + 1 < s.size() && (s[i + 1] == '\\' || s[i + 1] == '|')) ++i;
    out.push_back(s[i]);
  }
  return out;
}

std::string unescape_value(std::string_view s, bool allow_tab) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\' || i + 1 == s.size()) {
      out.push_back(s[i]);
      continue;
    }
    char n = s[++i];
    switch (n) {
      case 'n': out.push_back('\n'); break;
      case 'r': out.push_back('\r'); break;
      case 't':
        if (!allow_tab) throw FormatError("unexpected escape \\t");
        out.push_back('\t');
        break;
      case '\\':
      case '=': out.push_back(n); break;
      default: throw FormatError(std::string("unknown escape \\") + n);
    }
  }
  return out;
}

std::string header_name(const ObservableRecord& r) {
  std::string name = r.event_type + " by " + r.actor;
  for (auto& c : name)
    if (c == '\n' || c == '\r' || c == '\t') c = ' ';
  if (name.size() > kHeaderNameMax) name.resize(kHeaderNameMax);
  return name;
}

/// Assigns decoded key/value text pairs to a record via the field table.
ObservableRecord assemble(const std::vector<std::pair<std::string, std::string>>& kv,
                          const std::map<std::string_view, std::string_view>& native,
                          std::string_view time_key) {
  ObservableRecord r;
  std::vector<std::string> seen;
  for (const auto& [key, text] : kv) {
    if (key == time_key) {
      std::int64_t ms = 0;
      try {
        ms = std::stoll(text);
      } catch (const std::logic_error&) {
        throw FormatError("timestamp '" + text + "' is not an integer");
      }
      auto [day, minute] = from_epoch_millis(ms);
      r.day = day;
      r.minute = minute;
      seen.emplace_back("day");
      seen.emplace_back("minute");
      continue;
    }
    const auto field = std::string(field_for(native, key));
    const FieldSpec* spec = find_field(field);
    if (!spec) throw FormatError("unknown attribute '" + key + "'");
    spec->set(r, value_from_text(*spec, text));
    seen.push_back(field);
  }
  require_envelope(seen);
  return r;
}

const char* ecs_category(Surface s) {
  switch (s) {
    case Surface::idp: return "authentication";
    case Surface::email: return "email";
    case Surface::host:
    case Surface::telemetry: return "file";
    case Surface::slack:
    case Surface::jira:
    case Surface::pr: return "web";
    case Surface::phone: return nullptr;
  }
  return nullptr;
}

}  // namespace

std::string encode_jsonl(const ObservableRecord& r) { return to_json_object(r).dump(); }

ObservableRecord decode_jsonl(std::string_view line) { return from_json_object(parse_json(line)); }

std::string encode_ground_truth(const GroundTruthRecord& g) {
  ojson j = to_json_object(g.record);
  j["true_positive"] = g.true_positive;
  j["threat_class"] = g.threat_class ? ojson(std::string(to_string(*g.threat_class))) : ojson();
  j["behavior"] = g.behavior ? ojson(std::string(to_string(*g.behavior))) : ojson();
  j["attacker_actor"] = g.attacker_actor ? ojson(*g.attacker_actor) : ojson();
  return j.dump();
}

GroundTruthRecord decode_ground_truth(std::string_view line) {
  ojson j = parse_json(line);
  if (!j.is_object()) throw FormatError("ledger line must be a JSON object");
  GroundTruthRecord g;
  auto take = [&](const char* key) {
    if (!j.contains(key)) throw FormatError(std::string("ledger line lacks '") + key + "'");
    ojson v = j[key];
    j.erase(key);
    return v;
  };
  auto tp = take("true_positive");
  if (!tp.is_boolean()) throw FormatError("true_positive must be boolean");
  g.true_positive = tp.get<bool>();
  if (auto v = take("threat_class"); !v.is_null())
    g.threat_class = parse_enum_or_throw<ThreatClass>(v.get<std::string>());
  if (auto v = take("behavior"); !v.is_null())
    g.behavior = parse_enum_or_throw<BehaviorKind>(v.get<std::string>());
  if (auto v = take("attacker_actor"); !v.is_null()) g.attacker_actor = v.get<std::string>();
  g.record = from_json_object(j);
  return g;
}

std::string cef_escape_header(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '\\' || c == '|') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

std::string cef_escape_extension(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '=': out += "\\="; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

int cef_severity(const ObservableRecord& r) { return r.intrinsically_fatal ? 7 : 3; }

std::string encode_cef(const ObservableRecord& r) {
  std::string line = "CEF:0|" + std::string(kVendor) + "|" + std::string(kProduct) + "|" +
                     std::string(kProductVersion) + "|" + cef_escape_header(r.event_type) + "|" +
                     cef_escape_header(header_name(r)) + "|" + std::to_string(cef_severity(r)) +
                     "|";
  line += "rt=" + std::to_string(epoch_millis(r.day, r.minute));
  for (const auto& [key, value] : record_to_fields(r)) {
    if (key == "day" || key == "minute") continue;
    line += " ";
    line += native_or_self(cef_native(), key);
    line += "=" + cef_escape_extension(field_value_text(value));
  }
  return line;
}

ObservableRecord decode_cef(std::string_view line) {
  if (line.substr(0, 4) != "CEF:") throw FormatError("not a CEF line");
  std::size_t offset = 0;
  auto header = split_unescaped(line, '|', 8, &offset);
  if (header.size() != 8) throw FormatError("CEF header needs 7 pipe-delimited fields");
  if (header[0] != "CEF:0" || header[1] != kVendor || header[2] != kProduct)
    throw FormatError("unexpected CEF vendor/product");
  const std::string_view ext = line.substr(offset);

  // In the extension every literal '=' is escaped, so each unescaped '=' ends a key.
  std::vector<std::pair<std::size_t, std::size_t>> keys;  // [key_start, eq_pos]
  for (std::size_t i = 0; i < ext.size(); ++i) {
    if (ext[i] == '\\') {
      ++i;
      continue;
    }
    if (ext[i] != '=') continue;
    std::size_t start = ext.rfind(' ', i);
    start = start == std::string_view::npos ? 0 : start + 1;
    keys.emplace_back(start, i);
  }
  std::vector<std::pair<std::string, std::string>> kv;
  for (std::size_t k = 0; k < keys.size(); ++k) {
    auto [start, eq] = keys[k];
    std::size_t end = k + 1 < keys.size() ? keys[k + 1].first - 1 : ext.size();
    if (end < eq + 1) throw FormatError("malformed CEF extension");
    kv.emplace_back(std::string(ext.substr(start, eq - start)),
                    unescape_value(ext.substr(eq + 1, end - eq - 1), false));
  }
  auto r = assemble(kv, cef_native(), "rt");
  if (unescape_header(header[4]) != r.event_type)
    throw FormatError("CEF signature id disagrees with act");
  return r;
}

std::string leef_escape_value(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string encode_leef(const ObservableRecord& r) {
  std::string line = "LEEF:2.0|" + std::string(kVendor) + "|" + std::string(kProduct) + "|" +
                     std::string(kProductVersion) + "|" + cef_escape_header(r.event_type) +
                     "|x09|";
  line += "devTime=" + std::to_string(epoch_millis(r.day, r.minute));
  line += "\tsev=" + std::to_string(cef_severity(r));
  for (const auto& [key, value] : record_to_fields(r)) {
    if (key == "day" || key == "minute") continue;
    line += "\t";
    line += native_or_self(leef_native(), key);
    line += "=" + leef_escape_value(field_value_text(value));
  }
  return line;
}

ObservableRecord decode_leef(std::string_view line) {
  if (line.substr(0, 9) != "LEEF:2.0|") throw FormatError("not a LEEF 2.0 line");
  std::size_t offset = 0;
  auto header = split_unescaped(line, '|', 7, &offset);
  if (header.size() != 7) throw FormatError("LEEF 2.0 header needs 6 pipe-delimited fields");
  if (header[1] != kVendor || header[2] != kProduct) throw FormatError("unexpected LEEF vendor");
  if (header[5] != "x09" && header[5] != "\t")
    throw FormatError("unsupported LEEF delimiter '" + header[5] + "'");

  std::vector<std::pair<std::string, std::string>> kv;
  const std::string_view body = line.substr(offset);
  std::size_t pos = 0;
  while (pos <= body.size()) {
    auto tab = body.find('\t', pos);
    auto attr = body.substr(pos, tab == std::string_view::npos ? std::string_view::npos : tab - pos);
    auto eq = attr.find('=');
    if (eq == std::string_view::npos) throw FormatError("LEEF attribute without '='");
    auto key = std::string(attr.substr(0, eq));
    if (key != "sev") kv.emplace_back(key, unescape_value(attr.substr(eq + 1), true));
    if (tab == std::string_view::npos) break;
    pos = tab + 1;
  }
  auto r = assemble(kv, leef_native(), "devTime");
  if (unescape_header(header[4]) != r.event_type)
    throw FormatError("LEEF event id disagrees with event_type");
  return r;
}

std::string sim_timestamp(int day, int minute) {
  using namespace std::chrono;
  const sys_days epoch = year{2025} / January / 6;
  const sys_days date = epoch + days{day - 1};
  const year_month_day ymd{date};
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:00.000Z", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), minute / 60,
                minute % 60);
  return buf;
}

std::pair<int, int> parse_sim_timestamp(std::string_view ts) {
  int y = 0, mo = 0, d = 0, h = 0, mi = 0;
  char tail[16] = {};
  const std::string s(ts);
  if (std::sscanf(s.c_str(), "%4d-%2d-%2dT%2d:%2d:%15s", &y, &mo, &d, &h, &mi, tail) != 6 ||
      std::string(tail) != "00.000Z")
    throw FormatError("malformed @timestamp '" + s + "'");
  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) throw FormatError("invalid date in @timestamp '" + s + "'");
  const sys_days epoch = year{2025} / January / 6;
  const auto offset = (sys_days{ymd} - epoch).count();
  return {static_cast<int>(offset) + 1, h * 60 + mi};
}

std::string encode_ecs(const ObservableRecord& r) {
  ojson doc;
  doc["@timestamp"] = sim_timestamp(r.day, r.minute);
  doc["ecs"] = {{"version", "8.11.0"}};
  ojson event;
  event["id"] = r.record_id;
  event["kind"] = "event";
  if (const char* cat = ecs_category(r.surface)) event["category"] = ojson::array({cat});
  event["action"] = r.event_type;
  event["dataset"] = "orgforge." + std::string(to_string(r.surface));
  event["severity"] = cef_severity(r);
  doc["event"] = event;
  doc["user"] = {{"name", r.actor}};
  if (r.source_ip) doc["source"] = {{"ip", *r.source_ip}};
  doc["host"] = {{"name", r.device_id ? *r.device_id : "orgforge-" + std::string(to_string(r.surface))}};
  doc["message"] = r.payload;
  ojson vendor = ojson::object();
  for (const auto& [key, value] : record_to_fields(r)) {
    if (key == "record_id" || key == "day" || key == "minute" || key == "actor" ||
        key == "event_type" || key == "source_ip" || key == "payload")
      continue;
    vendor[std::string(key)] = value_to_json(value);
  }
  doc["orgforge"] = vendor;
  return doc.dump();
}

ObservableRecord decode_ecs(std::string_view line) {
  const ojson doc = parse_json(line);
  auto at = [&](std::initializer_list<const char*> path) -> const ojson& {
    const ojson* cur = &doc;
    for (const char* p : path) {
      if (!cur->is_object() || !cur->contains(p))
        throw FormatError(std::string("ECS document lacks '") + p + "'");
      cur = &(*cur)[p];
    }
    return *cur;
  };
  ObservableRecord r;
  auto [day, minute] = parse_sim_timestamp(at({"@timestamp"}).get<std::string>());
  r.day = day;
  r.minute = minute;
  set_from_json(r, "record_id", at({"event", "id"}));
  set_from_json(r, "event_type", at({"event", "action"}));
  set_from_json(r, "actor", at({"user", "name"}));
  set_from_json(r, "payload", at({"message"}));
  if (doc.contains("source")) set_from_json(r, "source_ip", at({"source", "ip"}));
  std::vector<std::string> seen{"record_id", "day", "minute", "actor", "event_type", "payload"};
  for (const auto& [key, value] : at({"orgforge"}).items()) {
    set_from_json(r, key, value);
    seen.push_back(key);
  }
  require_envelope(seen);
  return r;
}

std::string observable_file_name(LogFormat format) {
  const std::string stem(kObservableStem);
  switch (format) {
    case LogFormat::jsonl: return stem + ".jsonl";
    case LogFormat::cef: return stem + ".cef";
    case LogFormat::ecs: return stem + ".ecs.jsonl";
    case LogFormat::leef: return stem + ".leef";
    case LogFormat::all: break;
  }
  throw std::invalid_argument("observable_file_name: 'all' names no single file");
}

std::vector<LogFormat> expand_formats(LogFormat format) {
  if (format == LogFormat::all) return {LogFormat::jsonl, LogFormat::cef, LogFormat::ecs, LogFormat::leef};
  return {format};
}

std::string encode(LogFormat format, const ObservableRecord& r) {
  switch (format) {
    case LogFormat::jsonl: return encode_jsonl(r);
    case LogFormat::cef: return encode_cef(r);
    case LogFormat::ecs: return encode_ecs(r);
    case LogFormat::leef: return encode_leef(r);
    case LogFormat::all: break;
  }
  throw std::invalid_argument("encode: pick a concrete format");
}

ObservableRecord decode(LogFormat format, std::string_view line) {
  switch (format) {
    case LogFormat::jsonl: return decode_jsonl(line);
    case LogFormat::cef: return decode_cef(line);
    case LogFormat::ecs: return decode_ecs(line);
    case LogFormat::leef: return decode_leef(line);
    case LogFormat::all: break;
  }
  throw std::invalid_argument("decode: pick a concrete format");
}

void write_text(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw IoError(path.string(), "write failed");
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot open for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::vector<std::string> lines;
  std::istringstream in(read_text(path));
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) lines.push_back(std::move(line));
  return lines;
}

namespace {
template <typename T, typename F>
fs::path write_lines(const fs::path& path, const std::vector<T>& items, F&& enc) {
  std::string text;
  for (const auto& item : items) {
    text += enc(item);
    text.push_back('\n');
  }
  write_text(path, text);
  return path;
}
}  // namespace

std::vector<fs::path> write_observable(const fs::path& dir, const std::vector<ObservableRecord>& records,
                                       LogFormat format) {
  std::vector<fs::path> out;
  for (auto f : expand_formats(format))
    out.push_back(write_lines(dir / observable_file_name(f), records,
                              [f](const ObservableRecord& r) { return encode(f, r); }));
  return out;
}

fs::path write_ground_truth(const fs::path& dir, const std::vector<GroundTruthRecord>& ledger) {
  return write_lines(dir / kGroundTruthFile, ledger, encode_ground_truth);
}

fs::path write_baseline_file(const fs::path& dir, const std::vector<ObservableRecord>& records) {
  return write_lines(dir / kBaselineFile, records, encode_jsonl);
}

std::vector<ObservableRecord> read_observable(const fs::path& path, LogFormat format) {
  std::vector<ObservableRecord> out;
  std::size_t n = 0;
  for (const auto& line : read_lines(path)) {
    ++n;
    try {
      out.push_back(decode(format, line));
    } catch (const FormatError& e) {
      throw FormatError(path.string() + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

std::vector<GroundTruthRecord> read_ground_truth(const fs::path& path) {
  std::vector<GroundTruthRecord> out;
  std::size_t n = 0;
  for (const auto& line : read_lines(path)) {
    ++n;
    try {
      out.push_back(decode_ground_truth(line));
    } catch (const FormatError& e) {
      throw FormatError(path.string() + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace orgforge
