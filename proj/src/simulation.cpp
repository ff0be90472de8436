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

#include "orgforge/simulation.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "orgforge/formats.hpp"
#include "orgforge/generate.hpp"
#include "orgforge/idp.hpp"
#include "orgforge/injection.hpp"

namespace orgforge {
namespace {

struct Slot {
  GroundTruthRecord entry;
  std::size_t seq;
};

class DayBuffer {
 public:
  void noise(ObservableRecord r) {
    GroundTruthRecord g;
    g.record = std::move(r);
    add(std::move(g));
  }
  void add(GroundTruthRecord g) { slots_.push_back({std::move(g), slots_.size()}); }
  void add(std::vector<GroundTruthRecord> gs) {
    for (auto& g : gs) add(std::move(g));
  }

  /// Moves records into `out` ordered by (minute, insertion order).
  void flush(std::vector<GroundTruthRecord>& out) {
    std::stable_sort(slots_.begin(), slots_.end(), [](const Slot& a, const Slot& b) {
      return a.entry.record.minute < b.entry.record.minute;
    });
    for (auto& s : slots_) out.push_back(std::move(s.entry));
    slots_.clear();
  }

 private:
  std::vector<Slot> slots_;
};

void reserve_uncorroborated(QuietWindows& quiet, const std::vector<GroundTruthRecord>& gs) {
  for (const auto& g : gs)
    if (g.record.corroborating_activity_expected == false)
      quiet.reserve(g.record.actor, g.record.day, g.record.minute);
}

}  // namespace

std::vector<ObservableRecord> Corpus::observable() const {
  std::vector<ObservableRecord> out;
  out.reserve(ledger.size());
  for (const auto& g : ledger) out.push_back(g.record);
  return out;
}

int Corpus::clean_period_end() const {
  int end = org.config.sim_days + 1;
  for (const auto& s : org.config.subjects) end = std::min(end, s.onset_day);
  return end;
}

std::vector<ObservableRecord> Corpus::baseline() const {
  const int end = clean_period_end();
  std::vector<ObservableRecord> out;
  for (const auto& g : ledger)
    if (g.record.day < end) out.push_back(g.record);
  return out;
}

Corpus run_simulation(const SimConfig& config, const ProseRenderer& renderer) {
  Corpus corpus{init_org(config), {}, {}};
  const OrgState& org = corpus.org;
  QuietWindows quiet;
  GenContext ctx{org, renderer, quiet, corpus.warnings};
  SocialEngineeringBacklog backlog;

  struct Subject {
    std::size_t index;
    const ThreatSubjectConfig* config;
  };
  std::vector<Subject> subjects;
  for (const auto& s : config.subjects) subjects.push_back({*org.index_of(s.name), &s});

  std::map<int, std::vector<GroundTruthRecord>> host_trails;
  for (const auto& s : subjects) {
    if (!s.config->has(BehaviorKind::host_data_hoarding)) continue;
    auto starts = plan_hoarding_trails(org, *s.config, org.root.derive("hoarding-plan", s.index));
    if (starts.size() < static_cast<std::size_t>(config.hoarding_trails))
      corpus.warnings.push_back("fewer hoarding trails fit for " + s.config->name + " than configured");
    for (int start : starts) {
      auto rng = org.root.derive("hoarding", s.index, static_cast<std::uint64_t>(start));
      for (auto& g : schedule_host_hoarding(ctx, org.employees[s.index], *s.config, start, rng))
        host_trails[g.record.day].push_back(std::move(g));
    }
  }

  for (int day = 1; day <= config.sim_days; ++day) {
    DayBuffer buf;
    const auto d = static_cast<std::uint64_t>(day);
    auto fires = [&](const Subject& s, BehaviorKind b) {
      return org.root.derive("fire", s.index, d, to_string(b))
          .bernoulli(config.probability_for(b));
    };
    auto stream = [&](const Subject& s, BehaviorKind b) {
      return org.root.derive("inject", s.index, d, to_string(b));
    };

    // Uncorroborated authentications first, so later collaboration records can avoid them.
    for (const auto& s : subjects) {
      if (!is_weekday(day) || !config.idp_logs) continue;
      const auto active = active_behaviors(*s.config, day);
      auto has = [&](BehaviorKind b) { return std::find(active.begin(), active.end(), b) != active.end(); };
      const auto& e = org.employees[s.index];
      auto rng = org.root.derive("idp-anomaly", s.index, d);
      std::vector<GroundTruthRecord> events;
      if (s.config->threat_class == ThreatClass::malicious && has(BehaviorKind::idp_anomaly))
        events = emit_malicious_anomalies(e, *s.config, day, rng);
      else if (s.config->threat_class == ThreatClass::disgruntled &&
               has(BehaviorKind::unusual_hours_access))
        events = emit_disgruntled_ghosts(e, *s.config, day, rng);
      reserve_uncorroborated(quiet, events);
      buf.add(std::move(events));
    }
    for (const auto& s : subjects) {
      if (!is_weekday(day)) continue;
      const auto active = active_behaviors(*s.config, day);
      if (std::find(active.begin(), active.end(), BehaviorKind::social_engineering) == active.end())
        continue;
      if (fires(s, BehaviorKind::social_engineering))
        buf.add(fire_social_engineering(ctx, s.index, *s.config, day,
                                        stream(s, BehaviorKind::social_engineering), backlog));
    }

    auto baseline = generate_baseline_day(ctx, day, org.root);
    auto dlp = emit_dlp_noise(ctx, day, org.root, baseline);
    for (auto& r : baseline) buf.noise(std::move(r));

    for (const auto& s : subjects) {
      if (!is_weekday(day)) continue;
      const auto& e = org.employees[s.index];
      for (auto b : active_behaviors(*s.config, day)) {
        using B = BehaviorKind;
        if (b == B::social_engineering || b == B::host_data_hoarding || b == B::idp_anomaly)
          continue;
        if (!fires(s, b)) continue;
        auto rng = stream(s, b);
        switch (b) {
          case B::secret_in_commit: buf.add(fire_secret_in_commit(ctx, e, *s.config, day, rng)); break;
          case B::unusual_hours_access: buf.add(fire_unusual_hours(ctx, e, *s.config, day, rng)); break;
          case B::excessive_repo_cloning: buf.add(fire_repo_cloning(ctx, e, *s.config, day, rng)); break;
          case B::sentiment_drift: buf.add(fire_sentiment_post(ctx, e, *s.config, day, rng)); break;
          case B::cross_dept_snooping: buf.add(fire_cross_dept_snooping(ctx, e, *s.config, day, rng)); break;
          case B::data_exfil_email: buf.add(fire_data_exfil_email(ctx, e, *s.config, day, rng)); break;
          default: break;
        }
      }
    }
    buf.add(release_backlog(ctx, day, backlog));
    if (auto it = host_trails.find(day); it != host_trails.end()) buf.add(std::move(it->second));
    for (auto& r : dlp) buf.noise(std::move(r));
    buf.flush(corpus.ledger);
  }

  char id[32];
  for (std::size_t i = 0; i < corpus.ledger.size(); ++i) {
    std::snprintf(id, sizeof id, "evt-%06zu", i + 1);
    corpus.ledger[i].record.record_id = id;
  }
  return corpus;
}

Corpus run_simulation(const SimConfig& config) {
  TemplateRenderer renderer;
  return run_simulation(config, renderer);
}

bool verify_boundary(const Corpus& a, const Corpus& b) {
  if (a.ledger.size() != b.ledger.size()) return false;
  for (std::size_t i = 0; i < a.ledger.size(); ++i) {
    auto x = a.ledger[i];
    auto y = b.ledger[i];
    x.record.payload.clear();
    y.record.payload.clear();
    if (encode_ground_truth(x) != encode_ground_truth(y)) return false;
  }
  return true;
}

}  // namespace orgforge
