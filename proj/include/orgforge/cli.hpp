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
#include <optional>
#include <string>
#include <vector>

#include "orgforge/config.hpp"
#include "orgforge/pipeline.hpp"
#include "orgforge/scoring.hpp"

namespace orgforge {

inline constexpr std::string_view kRunFile = "run.json";
inline constexpr std::string_view kRunManifestFile = "manifest.json";
inline constexpr std::string_view kScoreFile = "score.json";
inline constexpr std::string_view kRunCorpusDir = "corpus";

struct GenerateResult {
  std::filesystem::path dir;
  std::vector<std::string> warnings;
  json manifest;
};

/// Writes observable file(s), ground truth, baseline file and _manifest.json.
GenerateResult cmd_generate(const SimConfig& config, const std::filesystem::path& out_dir);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Corpus self-checks. The corpus passes iff every check passes.
std::vector<CheckResult> cmd_verify(const std::filesystem::path& corpus_dir);

struct EvaluateOptions {
  /// "rule" or "gateway:<model id>".
  std::string agent = "rule";
  std::string prompt_variant = "official";
  std::string prompt_dir;
  /// Launch command for gateway agents; falls back to $ORGFORGE_GATEWAY.
  std::string gateway_command;
  PipelineOptions pipeline;
  std::set<ThreatClass> score_classes{ThreatClass::disgruntled, ThreatClass::malicious};
  bool semantic_track = true;
};

/// Runs the three stages and writes run.json, corpus/ and manifest.json.
std::filesystem::path cmd_evaluate(const std::filesystem::path& corpus_dir,
                                   const std::filesystem::path& run_dir,
                                   const EvaluateOptions& options);

/// Checks the run manifest, scores, writes score.json and returns its content.
/// Throws IntegrityError when a listed file no longer matches its digest.
json cmd_score(const std::filesystem::path& run_dir);

/// Appends one scored row to a JSONL board unless the run digest is already there.
/// Returns whether a row was written.
bool cmd_leaderboard_append(const std::filesystem::path& run_dir,
                            const std::filesystem::path& board);

/// sha256 of the run manifest: the identity of a run on the leaderboard.
std::string run_digest(const std::filesystem::path& run_dir);

/// Wall-clock ISO-8601 time, or $SOURCE_DATE_EPOCH when set.
std::string timestamp_now();

/// Applies `key=value` overrides using config key names, then validates.
void apply_override(SimConfig& config, const std::string& key, const std::string& value);

}  // namespace orgforge
