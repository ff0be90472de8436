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

#include "orgforge/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "orgforge/errors.hpp"

namespace orgforge {
namespace {

template <typename T>
T scalar_as(const YAML::Node& node, const std::string& field, const char* what) {
  if (!node.IsScalar()) throw ConfigError(field, std::string("expected ") + what);
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(field, std::string("expected ") + what + ", got '" + node.Scalar() + "'");
  }
}

void check_keys(const YAML::Node& map, const std::set<std::string>& allowed,
                const std::string& prefix) {
  for (const auto& kv : map) {
    auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) throw ConfigError(prefix + key, "unknown key");
  }
}

ThreatSubjectConfig parse_subject(const YAML::Node& node, const std::string& at) {
  if (!node.IsMap()) throw ConfigError(at, "subject block must be a mapping");
  check_keys(node, {"name", "class", "threat_class", "onset_day", "behaviors"}, at + ".");
  ThreatSubjectConfig s;
  if (!node["name"]) throw ConfigError(at + ".name", "missing");
  s.name = scalar_as<std::string>(node["name"], at + ".name", "a string");

  auto cls = node["class"] ? node["class"] : node["threat_class"];
  if (!cls) throw ConfigError(at + ".class", "missing");
  auto cls_text = scalar_as<std::string>(cls, at + ".class", "a string");
  auto parsed = parse_enum<ThreatClass>(cls_text);
  if (!parsed) throw ConfigError(at + ".class", "unknown threat class '" + cls_text + "'");
  s.threat_class = *parsed;

  if (!node["onset_day"]) throw ConfigError(at + ".onset_day", "missing");
  s.onset_day = scalar_as<int>(node["onset_day"], at + ".onset_day", "an integer");

  if (auto list = node["behaviors"]) {
    if (!list.IsSequence()) throw ConfigError(at + ".behaviors", "expected a list");
    for (std::size_t i = 0; i < list.size(); ++i) {
      auto field = at + ".behaviors[" + std::to_string(i) + "]";
      auto text = scalar_as<std::string>(list[i], field, "a behavior name");
      auto b = parse_enum<BehaviorKind>(text);
      if (!b) throw ConfigError(field, "'" + text + "' is not in the behavior taxonomy");
      if (!s.has(*b)) s.behaviors.push_back(*b);
    }
  }
  return s;
}

void check_fraction(double v, const std::string& field) {
  if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(field, "must be in [0, 1]");
}

}  // namespace

void validate(const SimConfig& c) {
  if (c.sim_days < 1) throw ConfigError("sim_days", "must be a positive integer");
  if (c.population_size < 1) throw ConfigError("population_size", "must be a positive integer");
  if (static_cast<std::size_t>(c.population_size) < c.subjects.size())
    throw ConfigError("population_size", "smaller than the number of subjects");
  check_fraction(c.dlp_noise_ratio, "dlp_noise_ratio");
  check_fraction(c.firing_probability, "firing_probability");
  check_fraction(c.incident_rate, "incident_rate");
  for (const auto& [b, p] : c.behavior_probabilities)
    check_fraction(p, "behavior_probabilities." + std::string(to_string(b)));
  if (c.hoarding_trails < 0) throw ConfigError("hoarding_trails", "must be non-negative");

  std::set<std::string> names;
  for (std::size_t i = 0; i < c.subjects.size(); ++i) {
    const auto& s = c.subjects[i];
    const auto at = "subjects[" + std::to_string(i) + "]";
    if (s.name.empty()) throw ConfigError(at + ".name", "must be non-empty");
    if (!names.insert(s.name).second) throw ConfigError(at + ".name", "duplicate subject name");
    if (s.onset_day < 1) throw ConfigError(at + ".onset_day", "must be >= 1");
    if (s.onset_day > c.sim_days) throw ConfigError(at + ".onset_day", "exceeds sim_days");
  }
  if (c.vishing_victim) {
    if (c.vishing_victim->empty()) throw ConfigError("vishing_victim", "must be non-empty");
    if (names.count(*c.vishing_victim))
      throw ConfigError("vishing_victim", "must name an innocent employee");
  }
}

SimConfig parse_config(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ConfigError("<document>", e.what());
  }
  if (!root.IsMap()) throw ConfigError("<document>", "top level must be a mapping");
  check_keys(root,
             {"sim_days", "subjects", "dlp_noise_ratio", "idp_logs", "log_format", "seed",
              "population_size", "firing_probability", "behavior_probabilities",
              "hoarding_trails", "vishing_victim", "incident_rate"},
             "");

  SimConfig c;
  if (auto n = root["sim_days"]) c.sim_days = scalar_as<int>(n, "sim_days", "an integer");
  if (auto n = root["dlp_noise_ratio"])
    c.dlp_noise_ratio = scalar_as<double>(n, "dlp_noise_ratio", "a number");
  if (auto n = root["idp_logs"]) c.idp_logs = scalar_as<bool>(n, "idp_logs", "a boolean");
  if (auto n = root["log_format"]) {
    auto t = scalar_as<std::string>(n, "log_format", "a string");
    auto f = parse_enum<LogFormat>(t);
    if (!f) throw ConfigError("log_format", "unknown format '" + t + "'");
    c.log_format = *f;
  }
  if (auto n = root["seed"]) c.seed = scalar_as<std::uint64_t>(n, "seed", "a 64-bit integer");
  if (auto n = root["population_size"])
    c.population_size = scalar_as<int>(n, "population_size", "an integer");
  if (auto n = root["firing_probability"])
    c.firing_probability = scalar_as<double>(n, "firing_probability", "a number");
  if (auto n = root["hoarding_trails"])
    c.hoarding_trails = scalar_as<int>(n, "hoarding_trails", "an integer");
  if (auto n = root["incident_rate"])
    c.incident_rate = scalar_as<double>(n, "incident_rate", "a number");
  if (auto n = root["vishing_victim"]; n && !n.IsNull())
    c.vishing_victim = scalar_as<std::string>(n, "vishing_victim", "a string");
  if (auto n = root["behavior_probabilities"]) {
    if (!n.IsMap()) throw ConfigError("behavior_probabilities", "expected a mapping");
    for (const auto& kv : n) {
      auto key = kv.first.as<std::string>();
      auto b = parse_enum<BehaviorKind>(key);
      if (!b) throw ConfigError("behavior_probabilities." + key, "not in the behavior taxonomy");
      c.behavior_probabilities[*b] =
          scalar_as<double>(kv.second, "behavior_probabilities." + key, "a number");
    }
  }
  if (auto n = root["subjects"]) {
    if (!n.IsSequence()) throw ConfigError("subjects", "expected a list of subject blocks");
    for (std::size_t i = 0; i < n.size(); ++i)
      c.subjects.push_back(parse_subject(n[i], "subjects[" + std::to_string(i) + "]"));
  }
  validate(c);
  return c;
}

SimConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open config file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_to_json(const SimConfig& c) {
  nlohmann::ordered_json j;
  j["sim_days"] = c.sim_days;
  j["population_size"] = c.population_size;
  j["seed"] = c.seed;
  j["dlp_noise_ratio"] = c.dlp_noise_ratio;
  j["idp_logs"] = c.idp_logs;
  j["log_format"] = to_string(c.log_format);
  j["firing_probability"] = c.firing_probability;
  auto probs = nlohmann::ordered_json::object();
  for (const auto& [b, p] : c.behavior_probabilities) probs[std::string(to_string(b))] = p;
  j["behavior_probabilities"] = probs;
  j["hoarding_trails"] = c.hoarding_trails;
  j["incident_rate"] = c.incident_rate;
  j["vishing_victim"] = c.vishing_victim ? nlohmann::ordered_json(*c.vishing_victim) : nlohmann::ordered_json(nullptr);
  auto subjects = nlohmann::ordered_json::array();
  for (const auto& s : c.subjects) {
    nlohmann::ordered_json sj;
    sj["name"] = s.name;
    sj["class"] = to_string(s.threat_class);
    sj["onset_day"] = s.onset_day;
    auto bs = nlohmann::ordered_json::array();
    for (auto b : s.behaviors) bs.push_back(to_string(b));
    sj["behaviors"] = bs;
    subjects.push_back(sj);
  }
  j["subjects"] = subjects;
  return j.dump();
}

SimConfig reference_config(std::uint64_t seed) {
  using B = BehaviorKind;
  SimConfig c;
  c.sim_days = 51;
  c.population_size = 51;
  c.dlp_noise_ratio = 0.40;
  c.seed = seed;
  c.vishing_victim = "Chris";
  c.subjects = {
      {"Jordan", ThreatClass::negligent, 5, {B::secret_in_commit}},
      {"Tasha",
       ThreatClass::disgruntled,
       10,
       {B::sentiment_drift, B::cross_dept_snooping, B::unusual_hours_access}},
      {"Jax",
       ThreatClass::malicious,
       18,
       {B::data_exfil_email, B::excessive_repo_cloning, B::unusual_hours_access,
        B::sentiment_drift, B::host_data_hoarding, B::social_engineering, B::idp_anomaly}},
  };
  return c;
}

}  // namespace orgforge
