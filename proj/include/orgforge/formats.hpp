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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "orgforge/record.hpp"
#include "orgforge/types.hpp"

namespace orgforge {

inline constexpr std::string_view kProductVersion = "1.0.0";
inline constexpr std::string_view kObservableStem = "observable_telemetry";
inline constexpr std::string_view kGroundTruthFile = "_ground_truth.jsonl";
inline constexpr std::string_view kBaselineFile = "baseline_telemetry.jsonl";
inline constexpr std::string_view kCorpusManifestFile = "_manifest.json";
/// Longest CEF/LEEF header name; longer names are truncated (decoding never reads them).
inline constexpr std::size_t kHeaderNameMax = 128;

// JSONL: one object per record with keys in field-table order.
std::string encode_jsonl(const ObservableRecord& r);
ObservableRecord decode_jsonl(std::string_view line);

/// Observable fields followed by the label keys.
std::string encode_ground_truth(const GroundTruthRecord& g);
GroundTruthRecord decode_ground_truth(std::string_view line);

// CEF:0|OrgForge|OrgForge-IT|version|event_type|name|severity|extensions
std::string encode_cef(const ObservableRecord& r);
ObservableRecord decode_cef(std::string_view line);
std::string cef_escape_header(std::string_view s);
std::string cef_escape_extension(std::string_view s);
int cef_severity(const ObservableRecord& r);

// LEEF:2.0|OrgForge|OrgForge-IT|version|event_type|x09|attributes (tab separated)
std::string encode_leef(const ObservableRecord& r);
ObservableRecord decode_leef(std::string_view line);
std::string leef_escape_value(std::string_view s);

// ECS 8.x document, one per line.
std::string encode_ecs(const ObservableRecord& r);
ObservableRecord decode_ecs(std::string_view line);
/// ISO-8601 UTC timestamp for a sim time. Day 1 is 2025-01-06.
std::string sim_timestamp(int day, int minute);
/// Inverse of sim_timestamp. Throws FormatError on malformed input.
std::pair<int, int> parse_sim_timestamp(std::string_view ts);

std::string observable_file_name(LogFormat format);
/// The concrete formats `format` expands to (all -> four).
std::vector<LogFormat> expand_formats(LogFormat format);

std::string encode(LogFormat format, const ObservableRecord& r);
ObservableRecord decode(LogFormat format, std::string_view line);

std::vector<std::filesystem::path> write_observable(const std::filesystem::path& dir,
                                                    const std::vector<ObservableRecord>& records,
                                                    LogFormat format);
std::filesystem::path write_ground_truth(const std::filesystem::path& dir,
                                         const std::vector<GroundTruthRecord>& ledger);
std::filesystem::path write_baseline_file(const std::filesystem::path& dir,
                                          const std::vector<ObservableRecord>& records);

std::vector<std::string> read_lines(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);
std::vector<ObservableRecord> read_observable(const std::filesystem::path& path, LogFormat format);
std::vector<GroundTruthRecord> read_ground_truth(const std::filesystem::path& path);

}  // namespace orgforge
