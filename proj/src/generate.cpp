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

#include "orgforge/generate.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "orgforge/catalog.hpp"

namespace orgforge {
namespace {

constexpr double kSlackRate = 0.09;
constexpr double kJiraRate = 0.05;
constexpr double kEmailRate = 0.04;
constexpr double kPrRate = 0.02;
constexpr double kExternalEmailShare = 0.30;
constexpr double kIncidentChatterRate = 0.15;
constexpr double kMiddayReauth = 0.08;
constexpr double kLateReauth = 0.03;

constexpr int kLastBusinessMinute = kBusinessEnd - 1;

bool collaboration_surface(Surface s) {
  return s == Surface::slack || s == Surface::jira || s == Surface::email || s == Surface::pr;
}

std::string ticket_key(const Employee& e, SeededRng& rng) {
  std::string key;
  for (char c : e.department.substr(0, 3)) key.push_back(static_cast<char>(std::toupper(c)));
  return key + "-" + std::to_string(rng.uniform_int(100, 999));
}

ObservableRecord idp_auth(const Employee& e, int day, int minute, SeededRng& rng) {
  const auto& profile = e.device_profile;
  const auto& device = rng.pick(profile.devices);
  auto r = make_record(e.name, Surface::idp, "idp_auth", day, minute);
  r.application = std::string(rng.pick(catalog::kApplications));
  r.device_id = device.id;
  r.platform = device.platform;
  r.mfa_method = rng.pick(profile.mfa_methods);
  r.source_ip = corporate_ip(profile, rng);
  r.source_kind = SourceKind::corporate;
  r.mfa_failed = false;
  r.corroborating_activity_expected = true;
  r.payload = "SSO sign-in to " + *r.application + " via " +
              std::string(to_string(*r.mfa_method)) + " from " + *r.source_ip;
  return r;
}

}  // namespace

void QuietWindows::reserve(const std::string& actor, int day, int minute, int length) {
  const std::int64_t start = SimClock{day, minute}.absolute_minute();
  windows_[actor].emplace_back(start, start + length);
}

bool QuietWindows::blocked(const std::string& actor, int day, int minute) const {
  auto it = windows_.find(actor);
  if (it == windows_.end()) return false;
  const std::int64_t t = SimClock{day, minute}.absolute_minute();
  return std::any_of(it->second.begin(), it->second.end(),
                     [t](const auto& w) { return t >= w.first && t <= w.second; });
}

ObservableRecord make_record(const std::string& actor, Surface surface, std::string event_type,
                             int day, int minute) {
  ObservableRecord r;
  r.day = day;
  r.minute = wrap_minute(minute);
  r.actor = actor;
  r.surface = surface;
  r.event_type = std::move(event_type);
  r.outside_business_hours = !is_business_hours(r.minute);
  return r;
}

std::optional<int> place_minute(const QuietWindows& quiet, const std::string& actor, int day,
                                int lo, int hi, SeededRng& rng) {
  for (int attempt = 0; attempt < 12; ++attempt) {
    int m = wrap_minute(rng.uniform_int(lo, hi));
    if (!quiet.blocked(actor, day, m)) return m;
  }
  for (int m = lo; m <= hi; ++m)
    if (!quiet.blocked(actor, day, wrap_minute(m))) return wrap_minute(m);
  return std::nullopt;
}

bool is_active(const OrgState& org, std::size_t employee, int day) {
  if (is_weekday(day)) return true;
  return org.root.derive("presence", employee, static_cast<std::uint64_t>(day))
      .bernoulli(kWeekendPresence);
}

std::string render(const GenContext& ctx, ProseSurface surface, const std::string& actor,
                   std::string intent, std::map<std::string, std::string> slots,
                   std::vector<std::string> embeds, SeededRng& rng) {
  ProseProposal p;
  p.surface = surface;
  p.actor = actor;
  p.intent = std::move(intent);
  p.slots = std::move(slots);
  p.required_embeds = std::move(embeds);
  p.seed = rng.derive("prose").seed();
  return ensure_embeds(ctx.renderer.render(p), p.required_embeds);
}

std::string email_address(const std::string& name) {
  std::string local;
  for (char c : name) {
    if (std::isalnum(static_cast<unsigned char>(c)))
      local.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    else if (c == ' ')
      local.push_back('.');
  }
  return local + "@" + kInternalDomain;
}

std::string personal_address(const std::string& name, std::string_view domain, SeededRng& rng) {
  auto local = email_address(name);
  local.resize(local.find('@'));
  return local + std::to_string(rng.uniform_int(10, 99)) + "@" + std::string(domain);
}

std::vector<ObservableRecord> benign_idp_day(const Employee& e, int day, SeededRng rng) {
  std::vector<ObservableRecord> out;
  out.push_back(idp_auth(e, day, rng.uniform_int(8 * 60, 9 * 60 + 29), rng));
  if (rng.bernoulli(kMiddayReauth)) out.push_back(idp_auth(e, day, rng.uniform_int(720, 839), rng));
  if (rng.bernoulli(kLateReauth)) out.push_back(idp_auth(e, day, rng.uniform_int(900, 1019), rng));
  return out;
}

std::vector<ObservableRecord> generate_baseline_day(const GenContext& ctx, int day,
                                                    const SeededRng& root) {
  const auto& org = ctx.org;
  std::vector<ObservableRecord> out;
  for (std::size_t i = 0; i < org.employees.size(); ++i) {
    if (!is_active(org, i, day)) continue;
    const auto& e = org.employees[i];
    const auto base = root.derive("baseline", i, static_cast<std::uint64_t>(day));

    if (org.config.idp_logs)
      for (auto& r : benign_idp_day(e, day, base.derive("idp"))) out.push_back(std::move(r));

    auto place = [&](SeededRng& rng) {
      return place_minute(ctx.quiet, e.name, day, kBusinessStart, kLastBusinessMinute, rng);
    };
    auto project = [](SeededRng& rng) { return std::string(rng.pick(catalog::kProjects)); };

    if (auto rng = base.derive("slack"); rng.bernoulli(kSlackRate)) {
      if (auto m = place(rng)) {
        auto r = make_record(e.name, Surface::slack, "slack_message", day, *m);
        r.payload = render(ctx, ProseSurface::slack, e.name, "status_update",
                           {{"project", project(rng)}, {"ticket", ticket_key(e, rng)}}, {}, rng);
        out.push_back(std::move(r));
      }
    }
    if (auto rng = base.derive("incident"); org.is_incident_day(day) &&
                                            rng.bernoulli(kIncidentChatterRate)) {
      if (auto m = place(rng)) {
        auto r = make_record(e.name, Surface::slack, "slack_message", day, *m);
        r.payload =
            render(ctx, ProseSurface::slack, e.name, "incident_chatter",
                   {{"project", project(rng)}}, {}, rng);
        out.push_back(std::move(r));
      }
    }
    if (auto rng = base.derive("jira"); rng.bernoulli(kJiraRate)) {
      if (auto m = place(rng)) {
        static constexpr std::array<std::string_view, 4> kStates{"In Progress", "In Review",
                                                                 "Done", "Blocked"};
        auto r = make_record(e.name, Surface::jira, "ticket_update", day, *m);
        r.department = e.department;
        r.payload = "Moved " + ticket_key(e, rng) + " to " + std::string(rng.pick(kStates));
        out.push_back(std::move(r));
      }
    }
    if (auto rng = base.derive("email"); rng.bernoulli(kEmailRate)) {
      if (auto m = place(rng)) {
        auto r = make_record(e.name, Surface::email, "email_sent", day, *m);
        std::string greeting;
        if (rng.bernoulli(kExternalEmailShare) || e.known_contacts.empty()) {
          auto domain = std::string(rng.pick(catalog::kPartnerDomains));
          r.counterparty = "accounts@" + domain;
          r.recipient_domain = domain;
          r.is_external = true;
          greeting = "team";
        } else {
          const auto& peer = rng.pick(e.known_contacts);
          r.counterparty = peer;
          r.recipient_domain = kInternalDomain;
          greeting = peer;
        }
        r.payload = render(ctx, ProseSurface::email, e.name, "outbound_note",
                           {{"counterparty", greeting}, {"project", project(rng)}}, {}, rng);
        out.push_back(std::move(r));
      }
    }
    if (auto rng = base.derive("pr"); rng.bernoulli(kPrRate)) {
      if (auto m = place(rng)) {
        auto r = make_record(e.name, Surface::pr, "pr_opened", day, *m);
        r.payload = render(ctx, ProseSurface::pr_description, e.name, "review_comment",
                           {{"repo", std::string(rng.pick(catalog::kRepos))}}, {}, rng);
        out.push_back(std::move(r));
      }
    }
  }
  return out;
}

std::vector<ObservableRecord> emit_dlp_noise(const GenContext& ctx, int day, const SeededRng& root,
                                             const std::vector<ObservableRecord>& day_activity) {
  const auto& org = ctx.org;
  std::vector<ObservableRecord> out;
  const double ratio = org.config.dlp_noise_ratio;
  if (ratio <= 0.0) return out;

  std::map<std::string, int> activity;
  for (const auto& r : day_activity)
    if (r.day == day && collaboration_surface(r.surface)) ++activity[r.actor];

  for (std::size_t i = 0; i < org.employees.size(); ++i) {
    const auto& e = org.employees[i];
    auto it = activity.find(e.name);
    if (it == activity.end()) continue;
    auto rng = root.derive("dlp", i, static_cast<std::uint64_t>(day));
    // Stochastic rounding with a single uniform keeps the count monotone in the ratio.
    const double expected = ratio * it->second;
    const double whole = std::floor(expected);
    const int count = static_cast<int>(whole) + (rng.uniform01() < expected - whole ? 1 : 0);
    for (int k = 0; k < count; ++k) {
      auto ev = rng.derive("event", static_cast<std::uint64_t>(k));
      const int minute = ev.uniform_int(kBusinessStart, kLastBusinessMinute);
      ObservableRecord r;
      switch (ev.below(4)) {
        case 0: {
          r = make_record(e.name, Surface::telemetry, "file_access", day, minute);
          r.payload = "Opened " + std::string(ev.pick(catalog::kShares)) + "\\report-" +
                      std::to_string(ev.uniform_int(1, 60)) + ".xlsx";
          break;
        }
        case 1: {
          r = make_record(e.name, Surface::telemetry, "share_read", day, minute);
          r.payload = "Listed " + std::string(ev.pick(catalog::kShares));
          break;
        }
        case 2: {
          r = make_record(e.name, Surface::telemetry, "repo_clone", day, minute);
          r.clone_count = ev.uniform_int(1, 3);
          r.payload = "git clone " + std::string(ev.pick(catalog::kRepos));
          break;
        }
        default: {
          r = make_record(e.name, Surface::telemetry, "ticket_read", day, minute);
          r.resource_department = e.department;
          r.payload = "Viewed " + ticket_key(e, ev);
          break;
        }
      }
      r.department = e.department;
      out.push_back(std::move(r));
    }
  }
  return out;
}

}  // namespace orgforge
