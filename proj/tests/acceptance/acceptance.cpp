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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "leaderboard_table.hpp"
#include "orgforge/cli.hpp"
#include "orgforge/config.hpp"
#include "orgforge/formats.hpp"
#include "orgforge/simulation.hpp"
#include "record_gen.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace orgforge;
using orgforge::testing::TempDir;
using Clock = std::chrono::steady_clock;

namespace {

// Three-decimal cells compare within half a unit in the last place.
constexpr double kCellTolerance = 5e-4;
constexpr double kGenerateBudgetSeconds = 60.0;
constexpr double kEvaluateBudgetSeconds = 300.0;

const fs::path kConfig = fs::path(ORGFORGE_SOURCE_DIR) / "configs/reference.yaml";
const fs::path kFixtures = fs::path(ORGFORGE_SOURCE_DIR) / "tests/fixtures/leaderboard";

/// Collects the first few failures of one criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    if (++failures_ <= 5) detail_ << (failures_ > 1 ? "; " : "") << what;
  }
  void near(double got, double want, const std::string& what) {
    std::ostringstream s;
    s << what << " got " << got << " want " << want;
    expect(std::fabs(got - want) <= kCellTolerance, s.str());
  }
  bool ok() const { return failures_ == 0; }
  std::string detail() const {
    return failures_ > 5 ? detail_.str() + " (+" + std::to_string(failures_ - 5) + " more)" : detail_.str();
  }

 private:
  int failures_ = 0;
  std::ostringstream detail_;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string slurp(const fs::path& p) { return read_text(p); }

void determinism(Check& c, std::string& note) {
  TempDir tmp("accept-det");
  const auto config = load_config(kConfig.string());
  const auto t0 = Clock::now();
  const auto a = cmd_generate(config, tmp.path() / "a");
  const double elapsed = seconds_since(t0);
  cmd_generate(config, tmp.path() / "b");
  int files = 0;
  for (const auto& [name, _] : a.manifest["files"].items()) {
    ++files;
    c.expect(slurp(tmp.path() / "a" / name) == slurp(tmp.path() / "b" / name), name + " differs");
  }
  c.expect(files == 6, "expected 4 observable files plus ledger and baseline, manifest lists " +
                           std::to_string(files));
  c.expect(slurp(tmp.path() / "a" / kCorpusManifestFile) == slurp(tmp.path() / "b" / kCorpusManifestFile),
           "manifest differs");
  c.expect(elapsed < kGenerateBudgetSeconds, "generation took " + std::to_string(elapsed) + " s");
  std::ostringstream s;
  s << "generate " << elapsed << " s, " << files << " files";
  note = s.str();
}

void corpus_bands(Check& c, std::string& note) {
  const auto corpus = run_simulation(load_config(kConfig.string()));
  int tp = 0;
  for (const auto& g : corpus.ledger) tp += g.true_positive ? 1 : 0;
  const double noise = 1.0 - double(tp) / corpus.ledger.size();
  c.expect(noise > 0.90, "noise rate " + std::to_string(noise));
  c.expect(tp >= 60 && tp <= 160, "true positives " + std::to_string(tp));
  const auto baseline = corpus.baseline();
  int first_onset = 1 << 30;
  for (const auto& s : load_config(kConfig.string()).subjects) first_onset = std::min(first_onset, s.onset_day);
  c.expect(!baseline.empty(), "baseline empty");
  for (const auto& r : baseline) c.expect(r.day < first_onset, "baseline record on day " + std::to_string(r.day));
  std::ostringstream s;
  s << "records " << corpus.ledger.size() << ", tp " << tp << ", noise " << noise << ", baseline "
    << baseline.size() << " (days < " << first_onset << ")";
  note = s.str();
}

void structural(Check& c, std::string& note) {
  TempDir tmp("accept-verify");
  cmd_generate(load_config(kConfig.string()), tmp.path());
  const auto checks = cmd_verify(tmp.path());
  for (const auto& k : checks) c.expect(k.passed, k.name + ": " + k.detail);
  for (auto required : {"label_hygiene", "vishing_cross_actor", "hoarding_trails",
                        "negligent_no_idp_anomaly", "digests"}) {
    bool seen = false;
    for (const auto& k : checks) seen = seen || k.name == required;
    c.expect(seen, std::string("check not run: ") + required);
  }
  const std::string cmd = std::string("'") + ORGFORGE_CLI + "' verify '" + tmp.path().string() + "' >/dev/null 2>&1";
  c.expect(std::system(cmd.c_str()) == 0, "verify command exited nonzero");
  note = std::to_string(checks.size()) + " corpus checks";
}

void scoring_oracle(Check& c, std::string& note) {
  TempDir tmp("accept-score");
  const auto& rows = orgforge::testing::kLeaderboard;
  const auto behaviors = orgforge::testing::behavior_table();
  int cells = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    const auto dir = tmp.path() / row.slug;
    fs::copy(kFixtures / "runs" / row.slug, dir, fs::copy_options::recursive);
    const auto r = cmd_score(dir)["report"];
    const std::string at = std::string(row.slug) + " ";
    c.near(r["triage"]["f1"].get<double>(), row.triage_f1, at + "triage F1");
    c.near(r["verdict"]["f1"].get<double>(), row.verdict_f1, at + "verdict F1");
    c.near(r["baseline_fp_rate"].get<double>(), row.base_fp, at + "base FP");
    c.near(r["verdict"]["precision"].get<double>(), row.verdict_precision, at + "verdict P");
    c.near(r["verdict"]["recall"].get<double>(), row.verdict_recall, at + "verdict R");
    c.expect(r["vishing_detected"].get<bool>() == row.vishing, at + "vishing flag");
    c.expect(r["host_trail_reconstructed"].get<bool>() == row.trail, at + "trail flag");
    cells += 7;
    const auto& pb = r["per_behavior"];
    for (const auto& [name, column] : behaviors) {
      const auto want = column[i];
      ++cells;
      if (want == orgforge::testing::kNotCited) {
        c.expect(!pb.contains(name), at + name + " cited");
        continue;
      }
      c.expect(pb.contains(name) && pb[name]["tp"] == want.first && pb[name]["fp"] == want.second,
               at + name + " want " + std::to_string(want.first) + "/" + std::to_string(want.second));
    }
  }
  // The arithmetic behind the distinctive cells.
  c.near(make_prf(2, 1, 0).precision, 0.667, "P(2,1,0)");
  c.near(make_prf(2, 3, 0).f1, 0.571, "F1(2,3,0)");
  c.near(make_prf(2, 39, 0).f1, 0.093, "F1(2,39,0)");
  c.near(round3(1.0 / 48), 0.021, "1/48");
  c.near(round3(39.0 / 48), 0.813, "39/48");
  note = std::to_string(rows.size()) + " runs, " + std::to_string(cells) + " cells";
}

void end_to_end(Check& c, std::string& note) {
  TempDir tmp("accept-e2e");
  cmd_generate(load_config(kConfig.string()), tmp.path() / "corpus");
  const auto t0 = Clock::now();
  cmd_evaluate(tmp.path() / "corpus", tmp.path() / "run", EvaluateOptions{});
  const auto score = cmd_score(tmp.path() / "run");
  const double elapsed = seconds_since(t0);
  c.expect(elapsed < kEvaluateBudgetSeconds, "took " + std::to_string(elapsed) + " s");

  const auto run = json::parse(slurp(tmp.path() / "run" / kRunFile));
  std::set<std::string> triaged, scanned;
  for (const auto& d : run["decisions"]) {
    const auto actor = d["actor"].get<std::string>();
    (d["stage"] == "credential_scan" ? scanned : triaged).insert(actor);
  }
  for (auto who : {"Tasha", "Jax"}) c.expect(triaged.count(who), std::string(who) + " not escalated by triage");
  c.expect(scanned.count("Jordan"), "Jordan not escalated by credential scan");
  bool chris_seen = false;
  for (const auto& v : run["verdicts"]) {
    if (v["employee"] != "Chris") continue;
    chris_seen = true;
    c.expect(v["verdict"] == "innocent", "Chris verdict " + v["verdict"].dump());
  }
  c.expect(chris_seen, "no verdict for Chris");
  const auto& r = score["report"];
  c.near(r["verdict"]["f1"].get<double>(), 1.0, "verdict F1");
  c.expect(r["vishing_detected"].get<bool>(), "vishing not detected");
  c.expect(r["host_trail_reconstructed"].get<bool>(), "trail not reconstructed");
  std::ostringstream s;
  s << "evaluate+score " << elapsed << " s, verdict F1 " << r["verdict"]["f1"].get<double>()
    << ", triage F1 " << r["triage"]["f1"].get<double>();
  note = s.str();
}

void format_conformance(Check& c, std::string& note) {
  using orgforge::testing::split_escaped;
  const auto records = orgforge::testing::sample(20260101, 1000);
  for (const auto& x : records) {
    const auto id = x.record_id + " ";
    c.expect(decode_jsonl(encode_jsonl(x)) == x, id + "jsonl round trip");

    const auto cef = encode_cef(x);
    std::size_t rest = 0;
    auto h = split_escaped(cef, '|', 8, &rest);
    c.expect(h.size() == 8 && h[0] == "CEF:0" && h[1] == "OrgForge" && h[2] == "OrgForge-IT" &&
                 h[3] == kProductVersion && (h[6] == "3" || h[6] == "7") &&
                 orgforge::testing::only_header_escapes(h[4]) &&
                 orgforge::testing::only_header_escapes(h[5]),
             id + "cef header");
    std::size_t keys = 0;
    const auto ext = cef.substr(rest);
    for (std::size_t i = 0; i < ext.size(); ++i) {
      if (ext[i] == '\\') ++i;
      else if (ext[i] == '=') ++keys;
    }
    c.expect(keys == record_to_fields(x).size() - 1, id + "cef extension escaping");
    c.expect(cef.find('\n') == std::string::npos && decode_cef(cef) == x, id + "cef round trip");

    const auto leef = encode_leef(x);
    auto lh = split_escaped(leef, '|', 7, &rest);
    c.expect(lh.size() == 7 && lh[0] == "LEEF:2.0" && lh[5] == "x09", id + "leef header");
    c.expect(decode_leef(leef) == x, id + "leef round trip");

    const auto ecs = json::parse(encode_ecs(x));
    c.expect(ecs.contains("@timestamp") && ecs.contains("ecs") && ecs["event"].contains("kind") &&
                 ecs["event"].contains("id") && ecs["event"].contains("action") &&
                 ecs["user"].contains("name") && ecs.contains("message"),
             id + "ecs required fields");
    c.expect(decode_ecs(ecs.dump()) == x, id + "ecs round trip");
  }
  const auto corpus = run_simulation(load_config(kConfig.string())).observable();
  for (const auto& x : corpus) {
    const auto expect = structural_tuple(x);
    for (auto f : expand_formats(LogFormat::all))
      c.expect(structural_tuple(decode(f, encode(f, x))) == expect,
               std::string(to_string(f)) + " tuple drift on " + x.record_id);
  }
  note = std::to_string(records.size()) + " generated records, " + std::to_string(corpus.size()) +
         " corpus records x 4 formats";
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<void(Check&, std::string&)> run;
  };
  const std::vector<Criterion> criteria{
      {"determinism", determinism},
      {"corpus_shape_bands", corpus_bands},
      {"structural_invariants", structural},
      {"scoring_oracle", scoring_oracle},
      {"end_to_end_rule_agent", end_to_end},
      {"format_conformance", format_conformance},
  };
  int failed = 0;
  for (const auto& k : criteria) {
    Check c;
    std::string note;
    try {
      k.run(c, note);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    failed += c.ok() ? 0 : 1;
    std::cout << (c.ok() ? "PASS " : "FAIL ") << k.name << ": " << (c.ok() ? note : c.detail()) << "\n";
  }
  std::cout << "INFO leaderboard placement of hosted models is not checked: model behavior is external\n";
  std::cout << (failed ? "FAILED " : "ALL PASSED ") << criteria.size() - failed << "/" << criteria.size() << "\n";
  return failed ? 1 : 0;
}
