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

// orgforge: generate, verify, evaluate, score, leaderboard-append.

#include <CLI11.hpp>
#include <iostream>

#include "orgforge/cli.hpp"
#include "orgforge/errors.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitAgent = 3;
constexpr int kExitIntegrity = 4;

}  // namespace

int main(int argc, char** argv) {
  using namespace orgforge;
  CLI::App app{"Insider-threat telemetry simulator and detection-pipeline evaluator"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Generate a labeled corpus");
  std::string config_path, out_dir;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::optional<int> sim_days, population;
  std::optional<double> noise;
  std::optional<std::string> log_format;
  std::optional<bool> idp_logs;
  gen->add_option("--config", config_path, "YAML config; the reference roster when omitted");
  gen->add_option("--out", out_dir, "Corpus directory")->required();
  gen->add_option("--seed", seed, "Override seed");
  gen->add_option("--sim-days", sim_days, "Override sim_days");
  gen->add_option("--population-size", population, "Override population_size");
  gen->add_option("--dlp-noise-ratio", noise, "Override dlp_noise_ratio");
  gen->add_option("--log-format", log_format, "jsonl, cef, ecs, leef or all");
  gen->add_option("--idp-logs", idp_logs, "Override idp_logs");
  gen->add_option("--set", sets, "Override any scalar config key: key=value");

  // verify
  auto* ver = app.add_subcommand("verify", "Run corpus self-checks");
  std::string verify_dir;
  ver->add_option("corpus", verify_dir, "Corpus directory")->required();

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "Run the detection pipeline against a corpus");
  std::string corpus_dir, run_dir, triage_mode = "structural", classes = "disgruntled,malicious";
  EvaluateOptions eo;
  bool no_semantic = false;
  ev->add_option("--corpus", corpus_dir, "Corpus directory")->required();
  ev->add_option("--out", run_dir, "Run directory")->required();
  ev->add_option("--agent", eo.agent, "rule or gateway:<model id>")->capture_default_str();
  ev->add_option("--prompt-variant", eo.prompt_variant, "Prompt variant id")->capture_default_str();
  ev->add_option("--prompt-dir", eo.prompt_dir, "Directory of <variant>_<role>.txt prompt files");
  ev->add_option("--gateway-command", eo.gateway_command, "Gateway launch command (default $ORGFORGE_GATEWAY)");
  ev->add_option("--triage-mode", triage_mode, "structural or agent")->capture_default_str();
  ev->add_option("--window-width", eo.pipeline.window_width, "Window width in days")->capture_default_str();
  ev->add_option("--window-stride", eo.pipeline.window_stride, "Window stride in days")->capture_default_str();
  ev->add_option("--score-classes", classes, "Threat classes scored, comma separated, or all")->capture_default_str();
  ev->add_flag("--no-semantic", no_semantic, "Skip the semantic scoring track");

  // score
  auto* sc = app.add_subcommand("score", "Score a run directory");
  std::string score_dir;
  sc->add_option("run", score_dir, "Run directory")->required();

  // leaderboard-append
  auto* lb = app.add_subcommand("leaderboard-append", "Score a run and append it to a leaderboard");
  std::string lb_run, board;
  lb->add_option("run", lb_run, "Run directory")->required();
  lb->add_option("--board", board, "Leaderboard JSONL file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      SimConfig config = config_path.empty() ? reference_config() : load_config(config_path);
      if (seed) apply_override(config, "seed", std::to_string(*seed));
      if (sim_days) apply_override(config, "sim_days", std::to_string(*sim_days));
      if (population) apply_override(config, "population_size", std::to_string(*population));
      if (noise) apply_override(config, "dlp_noise_ratio", std::to_string(*noise));
      if (log_format) apply_override(config, "log_format", "\"" + *log_format + "\"");
      if (idp_logs) apply_override(config, "idp_logs", *idp_logs ? "true" : "false");
      for (const auto& s : sets) {
        auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError(s, "expected key=value");
        apply_override(config, s.substr(0, eq), s.substr(eq + 1));
      }
      auto res = cmd_generate(config, out_dir);
      for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
      std::cout << res.dir.string() << ": " << res.manifest["counts"]["records"] << " records, "
                << res.manifest["counts"]["true_positive"] << " true positive\n";
      return 0;
    }
    if (*ver) {
      bool ok = true;
      for (const auto& c : cmd_verify(verify_dir)) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name;
        if (!c.passed) std::cout << ": " << c.detail;
        std::cout << "\n";
        ok = ok && c.passed;
      }
      return ok ? 0 : kExitIntegrity;
    }
    if (*ev) {
      auto mode = parse_triage_mode(triage_mode);
      if (!mode) throw ConfigError("triage_mode", "expected structural or agent");
      eo.pipeline.triage_mode = *mode;
      eo.semantic_track = !no_semantic;
      eo.score_classes.clear();
      if (classes == "all") {
        for (auto c : all_values<ThreatClass>()) eo.score_classes.insert(c);
      } else {
        std::size_t pos = 0;
        while (pos <= classes.size()) {
          auto end = classes.find(',', pos);
          auto name = classes.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
          auto c = parse_enum<ThreatClass>(name);
          if (!c) throw ConfigError("score_classes", "unknown threat class '" + name + "'");
          eo.score_classes.insert(*c);
          if (end == std::string::npos) break;
          pos = end + 1;
        }
      }
      std::cout << cmd_evaluate(corpus_dir, run_dir, eo).string() << "\n";
      return 0;
    }
    if (*sc) {
      std::cout << cmd_score(score_dir).dump(2) << "\n";
      return 0;
    }
    if (*lb) {
      const bool added = cmd_leaderboard_append(lb_run, board);
      std::cout << (added ? "appended " : "already present ") << run_digest(lb_run) << "\n";
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const AgentError& e) {
    std::cerr << "agent error: " << e.what() << "\n";
    return kExitAgent;
  } catch (const IntegrityError& e) {
    std::cerr << "integrity error: " << e.what() << "\n";
    return kExitIntegrity;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
