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

// Seeded randomness, configuration, population and prose rendering.

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "orgforge/config.hpp"
#include "orgforge/errors.hpp"
#include "orgforge/org.hpp"
#include "orgforge/prose.hpp"
#include "orgforge/rng.hpp"

namespace orgforge {
namespace {

// --- SeededRng ---

TEST(SeededRngTest, SameSeedSameSequence) {
  SeededRng a(42), b(42);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
  EXPECT_EQ(a.position(), 1000u);
}

TEST(SeededRngTest, PinnedFirstOutputs) {
  // xoshiro256** seeded through splitmix64; pinned so a change to either shows up.
  SeededRng r(0);
  std::uint64_t s0 = splitmix64(0), s1 = splitmix64(s0);
  const std::uint64_t x = s1 * 5;
  const std::uint64_t expect = ((x << 7) | (x >> 57)) * 9;
  EXPECT_EQ(r.next_u64(), expect);
}

TEST(SeededRngTest, DeriveIgnoresParentConsumption) {
  SeededRng parent(9);
  auto before = parent.derive("idp", 3, 11);
  for (int i = 0; i < 50; ++i) parent.next_u64();
  auto after = parent.derive("idp", 3, 11);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(before.next_u64(), after.next_u64());
}

TEST(SeededRngTest, DistinctTagsGiveDistinctStreams) {
  SeededRng root(9);
  std::set<std::uint64_t> firsts;
  for (const char* tag : {"idp", "slack", "jira", "email", "pr", "dlp"})
    for (std::uint64_t a = 0; a < 20; ++a) firsts.insert(root.derive(tag, a).next_u64());
  EXPECT_EQ(firsts.size(), 6u * 20u);
}

TEST(SeededRngTest, UniformIntStaysInClosedRange) {
  SeededRng r(5);
  std::set<int> seen;
  for (int i = 0; i < 5000; ++i) {
    int v = r.uniform_int(5, 25);
    ASSERT_GE(v, 5);
    ASSERT_LE(v, 25);
    seen.insert(v);
  }
  EXPECT_EQ(seen.size(), 21u);
}

TEST(SeededRngTest, BelowIsRoughlyUniform) {
  SeededRng r(123);
  std::map<std::uint64_t, int> counts;
  for (int i = 0; i < 40000; ++i) ++counts[r.below(4)];
  for (const auto& [k, n] : counts) EXPECT_NEAR(n / 40000.0, 0.25, 0.01) << k;
}

TEST(SeededRngTest, RejectsEmptyRanges) {
  SeededRng r(1);
  EXPECT_THROW(r.below(0), std::invalid_argument);
  EXPECT_THROW(r.uniform_int(3, 2), std::invalid_argument);
  EXPECT_THROW(r.pick(std::vector<int>{}), std::invalid_argument);
}

TEST(SeededRngTest, BernoulliEdges) {
  SeededRng r(1);
  for (int i = 0; i < 100; ++i) {
    EXPECT_FALSE(r.bernoulli(0.0));
    EXPECT_TRUE(r.bernoulli(1.0));
  }
}

// --- Config ---

template <typename F>
std::string config_error_field(F&& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<no error>";
}

TEST(ConfigTest, ParsesFullDocument) {
  auto c = parse_config(R"(
sim_days: 51
seed: 3
population_size: 51
dlp_noise_ratio: 0.4
idp_logs: true
log_format: all
subjects:
  - {name: Jordan, class: negligent, onset_day: 5, behaviors: [secret_in_commit]}
  - {name: Tasha, class: disgruntled, onset_day: 10,
     behaviors: [sentiment_drift, cross_dept_snooping, unusual_hours_access]}
)");
  EXPECT_EQ(c.sim_days, 51);
  EXPECT_EQ(c.seed, 3u);
  EXPECT_EQ(c.log_format, LogFormat::all);
  ASSERT_EQ(c.subjects.size(), 2u);
  EXPECT_EQ(c.subjects[1].threat_class, ThreatClass::disgruntled);
  EXPECT_TRUE(c.subjects[1].has(BehaviorKind::cross_dept_snooping));
}

TEST(ConfigTest, ErrorsNameTheField) {
  EXPECT_EQ(config_error_field([] { parse_config("population_size: 0"); }), "population_size");
  EXPECT_EQ(config_error_field([] { parse_config("sim_days: 0"); }), "sim_days");
  EXPECT_EQ(config_error_field([] { parse_config("dlp_noise_ratio: 1.5"); }), "dlp_noise_ratio");
  EXPECT_EQ(config_error_field([] { parse_config("log_format: xml"); }), "log_format");
  EXPECT_EQ(config_error_field([] { parse_config("sim_days: many"); }), "sim_days");
  EXPECT_EQ(config_error_field([] { parse_config("colour: blue"); }), "colour");
  EXPECT_EQ(config_error_field([] {
              parse_config("sim_days: 10\nsubjects: [{name: A, class: malicious, onset_day: 11}]");
            }),
            "subjects[0].onset_day");
  EXPECT_EQ(config_error_field([] {
              parse_config("subjects: [{name: A, class: malicious, onset_day: 2, "
                           "behaviors: [teleportation]}]");
            }),
            "subjects[0].behaviors[0]");
  EXPECT_EQ(config_error_field([] {
              parse_config("population_size: 1\nsubjects: [{name: A, class: malicious, onset_day: 2},"
                           " {name: B, class: negligent, onset_day: 2}]");
            }),
            "population_size");
}

TEST(ConfigTest, JsonRenderingIsStableAndReparses) {
  auto c = reference_config(11);
  auto text = config_to_json(c);
  EXPECT_EQ(text, config_to_json(reference_config(11)));
  auto back = parse_config(text);
  EXPECT_EQ(config_to_json(back), text);
}

TEST(ConfigTest, ReferenceRosterMatchesSubjectTable) {
  auto c = reference_config();
  ASSERT_EQ(c.subjects.size(), 3u);
  EXPECT_EQ(c.subjects[0].name, "Jordan");
  EXPECT_EQ(c.subjects[0].onset_day, 5);
  EXPECT_EQ(c.subjects[1].onset_day, 10);
  EXPECT_EQ(c.subjects[2].onset_day, 18);
  EXPECT_EQ(c.subjects[2].behaviors.size(), 7u);
  EXPECT_DOUBLE_EQ(c.dlp_noise_ratio, 0.40);
}

TEST(ConfigTest, MissingFileIsIoError) {
  EXPECT_THROW(load_config("/nonexistent/orgforge.yaml"), IoError);
}

// --- Population ---

TEST(OrgTest, ReferenceScaleHas48Innocents) {
  auto org = init_org(reference_config(7));
  EXPECT_EQ(org.employees.size(), 51u);
  EXPECT_EQ(org.innocents().size(), 48u);
  int subjects = 0;
  for (const auto& e : org.employees) subjects += e.is_subject;
  EXPECT_EQ(subjects, 3);
}

TEST(OrgTest, EmptyPopulationRejected) {
  auto c = reference_config();
  c.subjects.clear();
  c.population_size = 0;
  EXPECT_THROW(init_org(c), ConfigError);
}

TEST(OrgTest, SameConfigSameState) {
  EXPECT_EQ(org_to_json(init_org(reference_config(7))), org_to_json(init_org(reference_config(7))));
  EXPECT_NE(org_to_json(init_org(reference_config(7))), org_to_json(init_org(reference_config(8))));
}

TEST(OrgTest, StructuralInvariantsAcrossSeeds) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto c = reference_config(seed);
    c.population_size = 10 + static_cast<int>(seed % 7) * 6;
    auto org = init_org(c);
    ASSERT_EQ(org.employees.size(), static_cast<std::size_t>(c.population_size));
    std::set<std::string> names;
    for (const auto& e : org.employees) {
      EXPECT_TRUE(names.insert(e.name).second) << e.name;
      EXPECT_FALSE(e.device_profile.devices.empty());
      EXPECT_FALSE(e.device_profile.mfa_methods.empty());
      EXPECT_TRUE(std::is_sorted(e.known_contacts.begin(), e.known_contacts.end()));
      EXPECT_FALSE(std::count(e.known_contacts.begin(), e.known_contacts.end(), e.name));
    }
    EXPECT_TRUE(std::is_sorted(org.employees.begin(), org.employees.end(),
                               [](const auto& a, const auto& b) { return a.name < b.name; }));
    for (const auto& edge : org.edges) {
      EXPECT_LT(edge.a, edge.b);
      EXPECT_GE(edge.weight, 0.0);
      EXPECT_LE(edge.weight, 1.0);
    }
    EXPECT_TRUE(org.index_of("Chris").has_value()) << "pinned victim is part of the population";
  }
}

TEST(OrgTest, CorporateIpFallsInsideProfileRange) {
  auto org = init_org(reference_config(7));
  SeededRng r(4);
  for (const auto& e : org.employees) {
    auto ip = corporate_ip(e.device_profile, r);
    bool inside = false;
    for (const auto& range : e.device_profile.corporate_ip_ranges) {
      auto prefix = range.substr(0, range.find(".0.0/"));
      inside |= ip.rfind(prefix + ".", 0) == 0;
    }
    EXPECT_TRUE(inside) << ip;
  }
}

// --- Prose ---

ProseProposal status_update(std::uint64_t seed) {
  ProseProposal p;
  p.surface = ProseSurface::slack;
  p.actor = "Avery";
  p.intent = "status_update";
  p.slots = {{"project", "atlas"}, {"ticket", "OPS-123"}};
  p.seed = seed;
  return p;
}

TEST(ProseTest, SlackStatusUpdateIsShortAndNonEmpty) {
  TemplateRenderer renderer;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto text = renderer.render(status_update(seed));
    EXPECT_FALSE(text.empty());
    EXPECT_LE(text.size(), kSlackMaxChars);
    EXPECT_EQ(text.find('{'), std::string::npos) << text;
  }
}

TEST(ProseTest, RequiredEmbedAppearsVerbatim) {
  TemplateRenderer renderer;
  auto p = status_update(3);
  p.required_embeds = {"AKIASYNTH0123456789"};
  EXPECT_NE(renderer.render(p).find("AKIASYNTH0123456789"), std::string::npos);
}

TEST(ProseTest, SameProposalSameProse) {
  TemplateRenderer renderer;
  EXPECT_EQ(renderer.render(status_update(17)), renderer.render(status_update(17)));
}

TEST(ProseTest, UnknownIntentAndMissingSlotRaise) {
  SeededRng r(1);
  auto p = status_update(1);
  p.intent = "haiku";
  EXPECT_THROW(render_template(p, r), RenderError);
  auto q = status_update(1);
  q.slots.clear();
  bool threw = false;
  for (std::uint64_t s = 0; s < 20 && !threw; ++s) {
    SeededRng rr(s);
    try {
      render_template(q, rr);
    } catch (const RenderError&) {
      threw = true;
    }
  }
  EXPECT_TRUE(threw);
}

TEST(ProseTest, EnsureEmbedsDoesNotDuplicate) {
  EXPECT_EQ(ensure_embeds("key AKIA1", {"AKIA1"}), "key AKIA1");
  auto out = ensure_embeds("hello", {"AKIA1"});
  EXPECT_NE(out.find("AKIA1"), std::string::npos);
}

TEST(ProseTest, EverySurfaceHasIntents) {
  for (auto s : {ProseSurface::slack, ProseSurface::email, ProseSurface::pr_description,
                 ProseSurface::confluence})
    EXPECT_FALSE(template_intents(s).empty()) << to_string(s);
}

}  // namespace
}  // namespace orgforge
