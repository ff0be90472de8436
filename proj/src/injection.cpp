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

#include "orgforge/injection.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "orgforge/catalog.hpp"
#include "orgforge/clock.hpp"
#include "orgforge/idp.hpp"

namespace orgforge {
namespace {

constexpr int kLastBusinessMinute = kBusinessEnd - 1;
constexpr std::string_view kBase32 = "ABCDEFGHIJKLMNOPQRSTUVWXYZ234567";
constexpr std::string_view kAlnum =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789";
constexpr std::string_view kPasswordChars =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789!#%";

std::string draw(std::string_view alphabet, int n, SeededRng& rng) {
  std::string out;
  for (int i = 0; i < n; ++i) out.push_back(alphabet[rng.below(alphabet.size())]);
  return out;
}

bool all_in(std::string_view s, std::string_view alphabet) {
  return std::all_of(s.begin(), s.end(),
                     [&](char c) { return alphabet.find(c) != std::string_view::npos; });
}

GroundTruthRecord label(ObservableRecord r, const ThreatSubjectConfig& c, BehaviorKind b) {
  GroundTruthRecord g;
  g.record = std::move(r);
  g.true_positive = true;
  g.threat_class = c.threat_class;
  g.behavior = b;
  return g;
}

std::string project(SeededRng& rng) { return std::string(rng.pick(catalog::kProjects)); }

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ' ' || c == '\n' || c == '\t') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

bool is_emoji(std::string_view token) {
  return std::find(catalog::kEmoji.begin(), catalog::kEmoji.end(), token) != catalog::kEmoji.end();
}

/// Word with surrounding punctuation removed, lowercased.
std::string core(std::string_view token) {
  std::size_t b = 0, e = token.size();
  while (b < e && !std::isalnum(static_cast<unsigned char>(token[b]))) ++b;
  while (e > b && !std::isalnum(static_cast<unsigned char>(token[e - 1]))) --e;
  return lower(token.substr(b, e - b));
}

bool in_lexicon(const std::string& word) {
  return std::find(catalog::kSentimentLexicon.begin(), catalog::kSentimentLexicon.end(), word) !=
         catalog::kSentimentLexicon.end();
}

/// Innocent colleague chosen uniformly, never the subject.
std::optional<std::size_t> pick_innocent(const OrgState& org, std::size_t subject, SeededRng& rng) {
  auto pool = org.innocents();
  pool.erase(std::remove(pool.begin(), pool.end(), subject), pool.end());
  if (pool.empty()) return std::nullopt;
  return pool[rng.pick_index(pool.size())];
}

ObservableRecord outbound_email(const Employee& from, const std::string& to_name,
                                const std::string& subject_line, const std::string& body, int day,
                                int minute) {
  auto r = make_record(from.name, Surface::email, "email_sent", day, minute);
  r.counterparty = to_name;
  r.recipient_domain = kInternalDomain;
  r.payload = "From: " + email_address(from.name) + "\nTo: " + email_address(to_name) +
              "\nSubject: " + subject_line + "\n\n" + body;
  return r;
}

Injected spear_phish(const GenContext& ctx, const Employee& attacker,
                     const ThreatSubjectConfig& config, int day, SeededRng& rng,
                     const Employee* target) {
  auto m = place_minute(ctx.quiet, attacker.name, day, 9 * 60, 17 * 60, rng);
  if (!m) return {};
  const auto lookalike = std::string(rng.pick(catalog::kLookalikeDomains));
  std::map<std::string, std::string> slots{{"app", std::string(rng.pick(catalog::kApplications))},
                                           {"link", "https://" + lookalike + "/verify"}};
  auto body = render(ctx, ProseSurface::email, attacker.name, "credential_lure", slots, {}, rng);
  const std::string to =
      target ? target->name : "accounts@" + std::string(rng.pick(catalog::kPartnerDomains));
  auto r = outbound_email(attacker, to, "Action required on your account", body, day, *m);
  if (!target) {
    r.recipient_domain = to.substr(to.find('@') + 1);
    r.is_external = true;
  }
  r.reply_to_domain = lookalike;
  r.payload = "From: " + email_address(attacker.name) + "\nReply-To: support@" + lookalike +
              r.payload.substr(r.payload.find('\n'));
  r.source_ip = vpn_ip(rng);
  r.source_kind = SourceKind::vpn;
  r.anomalous_ip = true;
  if (target) r.sender_in_known_contacts = target->knows(attacker.name);
  return {label(std::move(r), config, BehaviorKind::social_engineering)};
}

Injected vishing(const GenContext& ctx, std::size_t subject, const ThreatSubjectConfig& config,
                 int day, SeededRng& rng, const Employee& victim) {
  const auto& org = ctx.org;
  const auto& attacker = org.employees[subject];
  const int call_minute = rng.uniform_int(10 * 60, 15 * 60 + 30);
  const int gap = rng.uniform_int(5, 25);
  const int duration = rng.uniform_int(180, 600);

  auto call = make_record(attacker.name, Surface::phone, "phone_call", day, call_minute);
  call.counterparty = victim.name;
  call.call_duration_seconds = duration;
  call.payload = "Outbound call to " + victim.name + " (" + std::to_string(duration) +
                 "s), caller ID shown as IT Service Desk";

  // Device and factor chosen to sit outside the victim's established profile.
  const auto& profile = victim.device_profile;
  Platform platform = Platform::macos;
  for (auto p : {Platform::macos, Platform::windows, Platform::linux_, Platform::android,
                 Platform::ios}) {
    if (!profile.uses_platform(p)) {
      platform = p;
      break;
    }
  }
  MfaMethod mfa = MfaMethod::totp;
  for (auto f : {MfaMethod::totp, MfaMethod::sms, MfaMethod::push}) {
    if (!profile.uses_mfa(f)) {
      mfa = f;
      break;
    }
  }
  const int auth_minute = call_minute + gap;
  auto auth = make_record(victim.name, Surface::idp, "idp_auth", day, auth_minute);
  auth.application = "okta-dashboard";
  do auth.device_id = new_device_id(platform, rng);
  while (profile.knows_device(*auth.device_id));
  auth.platform = platform;
  auth.mfa_method = mfa;
  auth.source_ip = residential_ip(rng);
  auth.source_kind = SourceKind::residential;
  auth.anomalous_ip = true;
  auth.new_device = true;
  auth.mfa_failed = false;
  auth.preceded_by_call_record = true;
  auth.call_to_auth_gap_minutes = gap;
  auth.corroborating_activity_expected = false;
  auth.payload = "SSO sign-in to okta-dashboard via " + std::string(to_string(mfa)) + " from " +
                 *auth.source_ip;
  ctx.quiet.reserve(victim.name, day, auth_minute);

  auto victim_side = label(std::move(auth), config, BehaviorKind::social_engineering);
  victim_side.attacker_actor = attacker.name;
  return {label(std::move(call), config, BehaviorKind::social_engineering),
          std::move(victim_side)};
}

Injected pretext(const GenContext& ctx, std::size_t subject, int origin_day, int day,
                 const std::string& target_name) {
  const auto& org = ctx.org;
  const auto& attacker = org.employees[subject];
  const auto* config = org.subject_config(attacker.name);
  auto rng = org.root.derive("pretext", subject, static_cast<std::uint64_t>(origin_day));
  auto m = place_minute(ctx.quiet, attacker.name, day, kBusinessStart, kLastBusinessMinute, rng);
  if (!m) return {};
  const auto& target = org.employee(target_name);
  auto r = make_record(attacker.name, Surface::slack, "slack_dm", day, *m);
  r.counterparty = target.name;
  r.sender_in_known_contacts = target.knows(attacker.name);
  r.payload = render(ctx, ProseSurface::slack, attacker.name, "impersonation",
                     {{"counterparty", target.name},
                      {"impersonated", "Morgan from IT"},
                      {"project", project(rng)}},
                     {}, rng);
  return {label(std::move(r), *config, BehaviorKind::social_engineering)};
}

}  // namespace

std::vector<BehaviorKind> active_behaviors(const ThreatSubjectConfig& subject, int day) {
  if (day < subject.onset_day) return {};
  return subject.behaviors;
}

std::string synthetic_credential(CredentialKind kind, SeededRng& rng) {
  const std::string marker(kSyntheticMarker);
  switch (kind) {
    case CredentialKind::aws_key: return "AKIA" + marker + draw(kBase32, 11, rng);
    case CredentialKind::github_token: return "ghp_" + marker + draw(kAlnum, 31, rng);
    case CredentialKind::db_password: return marker + "-" + draw(kPasswordChars, 14, rng);
  }
  return marker;
}

bool matches_credential_shape(CredentialKind kind, std::string_view v) {
  switch (kind) {
    case CredentialKind::aws_key:
      return v.size() == 20 && v.substr(0, 4) == "AKIA" && all_in(v.substr(4), kBase32);
    case CredentialKind::github_token:
      return v.size() == 40 && v.substr(0, 4) == "ghp_" && all_in(v.substr(4), kAlnum);
    case CredentialKind::db_password:
      return v.size() == 20 && v.substr(0, 6) == std::string(kSyntheticMarker) + "-" &&
             all_in(v.substr(6), kPasswordChars);
  }
  return false;
}

std::vector<std::string> find_synthetic_credentials(std::string_view text) {
  std::vector<std::string> out;
  const std::vector<std::pair<std::string, std::size_t>> shapes{
      {"AKIA" + std::string(kSyntheticMarker), 20},
      {"ghp_" + std::string(kSyntheticMarker), 40},
      {std::string(kSyntheticMarker) + "-", 20}};
  for (const auto& [prefix, len] : shapes) {
    for (auto pos = text.find(prefix); pos != std::string_view::npos;
         pos = text.find(prefix, pos + 1)) {
      // The password shape is a suffix of nothing else; skip hits inside longer tokens.
      if (prefix.back() == '-' && pos >= 4 &&
          (text.substr(pos - 4, 4) == "AKIA" || text.substr(pos - 4, 4) == "ghp_"))
        continue;
      if (pos + len <= text.size()) out.emplace_back(text.substr(pos, len));
    }
  }
  return out;
}

Injected fire_secret_in_commit(const GenContext& ctx, const Employee& subject,
                               const ThreatSubjectConfig& config, int day, SeededRng rng) {
  auto kind = static_cast<CredentialKind>(rng.below(3));
  return fire_secret_in_commit(ctx, subject, config, day, rng, kind);
}

Injected fire_secret_in_commit(const GenContext& ctx, const Employee& subject,
                               const ThreatSubjectConfig& config, int day, SeededRng rng,
                               CredentialKind kind) {
  const auto secret = synthetic_credential(kind, rng);
  std::string embed;
  switch (kind) {
    case CredentialKind::aws_key: embed = "AWS_ACCESS_KEY_ID=" + secret; break;
    case CredentialKind::github_token: embed = "GITHUB_TOKEN=" + secret; break;
    case CredentialKind::db_password: embed = "DB_PASSWORD=" + secret; break;
  }
  const int minute = rng.uniform_int(kBusinessStart, kLastBusinessMinute);
  auto r = make_record(subject.name, Surface::pr, "pr_opened", day, minute);
  r.intrinsically_fatal = true;
  r.payload = render(ctx, ProseSurface::pr_description, subject.name, "fixture_change",
                     {{"repo", std::string(rng.pick(catalog::kRepos))}}, {embed}, rng);
  return {label(std::move(r), config, BehaviorKind::secret_in_commit)};
}

Injected fire_unusual_hours(const GenContext& ctx, const Employee& subject,
                            const ThreatSubjectConfig& config, int day, SeededRng rng) {
  // [01:00, 03:00] has 121 minutes, [22:00, 23:00] has 61.
  std::optional<int> m;
  for (int attempt = 0; attempt < 4 && !m; ++attempt) {
    if (rng.uniform_int(0, 181) < 121)
      m = place_minute(ctx.quiet, subject.name, day, 60, 180, rng);
    else
      m = place_minute(ctx.quiet, subject.name, day, 22 * 60, 23 * 60, rng);
  }
  if (!m) return {};
  auto r = make_record(subject.name, Surface::slack, "slack_message", day, *m);
  if (!r.outside_business_hours)
    throw std::logic_error("fire_unusual_hours produced a business-hours timestamp");
  r.payload = render(ctx, ProseSurface::slack, subject.name, "status_update",
                     {{"project", project(rng)}, {"ticket", "OPS-" + std::to_string(rng.uniform_int(100, 999))}},
                     {}, rng);
  return {label(std::move(r), config, BehaviorKind::unusual_hours_access)};
}

Injected fire_repo_cloning(const GenContext&, const Employee& subject,
                           const ThreatSubjectConfig& config, int day, SeededRng rng) {
  const int minute = rng.uniform_int(kBusinessStart, kLastBusinessMinute);
  auto r = make_record(subject.name, Surface::telemetry, "repo_clone", day, minute);
  r.department = subject.department;
  r.clone_count = rng.uniform_int(kCloneBurstMin, kCloneBurstMax);
  r.payload = "git clone x" + std::to_string(*r.clone_count) + " across " +
              std::string(rng.pick(catalog::kRepos)) + " and related repositories";
  return {label(std::move(r), config, BehaviorKind::excessive_repo_cloning)};
}

std::string affect_strip(std::string_view text) {
  std::vector<std::string> kept;
  for (auto& token : split_words(text)) {
    if (is_emoji(token)) continue;
    auto c = core(token);
    if (!c.empty() && in_lexicon(c)) continue;
    token.erase(std::remove(token.begin(), token.end(), '!'), token.end());
    if (!token.empty()) kept.push_back(std::move(token));
  }
  std::string out;
  for (const auto& t : kept) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  while (!out.empty() && (out.back() == ',' || out.back() == ' ')) out.pop_back();
  if (out.empty()) return out;
  out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  if (std::isalnum(static_cast<unsigned char>(out.back()))) out.push_back('.');
  return out;
}

int sentiment_hits(std::string_view text) {
  int hits = 0;
  for (const auto& token : split_words(text)) {
    if (is_emoji(token) || in_lexicon(core(token))) ++hits;
  }
  return hits;
}

bool contains_passive_aggressive(std::string_view text) {
  for (const auto& f : catalog::kPassiveAggressive) {
    if (!f.prefix.empty() && text.find(f.prefix) != std::string_view::npos) return true;
    if (!f.suffix.empty() && text.find(f.suffix) != std::string_view::npos) return true;
  }
  return false;
}

std::string fire_sentiment_drift(ThreatClass cls, const std::string& base, SeededRng& rng) {
  if (base.empty()) return base;
  switch (cls) {
    case ThreatClass::disgruntled: {
      const auto& f = catalog::kPassiveAggressive[rng.below(catalog::kPassiveAggressive.size())];
      std::string out;
      if (!f.prefix.empty()) out = std::string(f.prefix) + " ";
      out += base;
      if (!f.suffix.empty()) out += " " + std::string(f.suffix);
      return out;
    }
    case ThreatClass::malicious: return affect_strip(base);
    case ThreatClass::negligent: return base;
  }
  return base;
}

Injected fire_sentiment_post(const GenContext& ctx, const Employee& subject,
                             const ThreatSubjectConfig& config, int day, SeededRng rng) {
  auto m = place_minute(ctx.quiet, subject.name, day, kBusinessStart, kLastBusinessMinute, rng);
  if (!m) return {};
  auto base = render(ctx, ProseSurface::slack, subject.name, "status_update",
                     {{"project", project(rng)}, {"ticket", "OPS-" + std::to_string(rng.uniform_int(100, 999))}},
                     {}, rng);
  auto framing = rng.derive("framing");
  auto r = make_record(subject.name, Surface::slack, "slack_message", day, *m);
  r.payload = fire_sentiment_drift(config.threat_class, base, framing);
  return {label(std::move(r), config, BehaviorKind::sentiment_drift)};
}

Injected fire_cross_dept_snooping(const GenContext& ctx, const Employee& subject,
                                  const ThreatSubjectConfig& config, int day, SeededRng rng) {
  std::vector<std::string> others;
  for (const auto& d : ctx.org.departments)
    if (d != subject.department) others.push_back(d);
  if (others.empty()) {
    ctx.warnings.push_back("day " + std::to_string(day) + ": cross_dept_snooping for " +
                           subject.name + " skipped, organization has a single department");
    return {};
  }
  Injected out;
  const int reads = rng.uniform_int(1, 2);
  for (int k = 0; k < reads; ++k) {
    const auto& dept = rng.pick(others);
    auto r = make_record(subject.name, Surface::telemetry, "ticket_read", day,
                         rng.uniform_int(kBusinessStart, kLastBusinessMinute));
    r.department = subject.department;
    r.resource_department = dept;
    std::string key;
    for (char c : dept.substr(0, 3)) key.push_back(static_cast<char>(std::toupper(c)));
    r.payload = "Viewed " + key + "-" + std::to_string(rng.uniform_int(100, 999));
    out.push_back(label(std::move(r), config, BehaviorKind::cross_dept_snooping));
  }
  return out;
}

Injected fire_data_exfil_email(const GenContext& ctx, const Employee& subject,
                               const ThreatSubjectConfig& config, int day, SeededRng rng) {
  auto m = place_minute(ctx.quiet, subject.name, day, 20 * 60, 23 * 60 + 30, rng);
  if (!m) return {};
  const auto domain = std::string(rng.pick(catalog::kPersonalDomains));
  const auto to = personal_address(subject.name, domain, rng);
  const auto phrase = std::string(rng.pick(catalog::kVagueDataPhrases));
  auto body = render(ctx, ProseSurface::email, subject.name, "personal_forward",
                     {{"data_phrase", phrase}}, {phrase}, rng);
  auto r = make_record(subject.name, Surface::email, "email_sent", day, *m);
  r.counterparty = to;
  r.recipient_domain = domain;
  r.is_external = true;
  r.payload = "From: " + email_address(subject.name) + "\nTo: " + to + "\nSubject: for later\n\n" +
              body;
  return {label(std::move(r), config, BehaviorKind::data_exfil_email)};
}

Injected schedule_host_hoarding(const GenContext& ctx, const Employee& subject,
                                const ThreatSubjectConfig& config, int start_day, SeededRng rng) {
  if (start_day + 2 > ctx.org.config.sim_days || start_day < 1) {
    ctx.warnings.push_back("host_data_hoarding for " + subject.name + " at day " +
                           std::to_string(start_day) + " not scheduled, fewer than 3 days remain");
    return {};
  }
  const int files = rng.uniform_int(15, 80);
  const int megabytes = rng.uniform_int(50, 800);
  const auto tool = static_cast<ArchiveTool>(rng.below(4));
  const auto dest = static_cast<Destination>(rng.below(4));
  const auto share = std::string(rng.pick(catalog::kShares));
  std::string user = email_address(subject.name);
  user.resize(user.find('@'));
  const std::string staging = "C:\\Users\\" + user + "\\AppData\\Local\\Temp\\stage";
  const std::string archive = "stage." + std::string(to_string(tool));
  auto after_hours = [&] { return rng.uniform_int(18 * 60 + 30, 23 * 60 + 30); };

  Injected out;
  auto copy = make_record(subject.name, Surface::host, "bulk_file_copy", start_day, after_hours());
  copy.department = subject.department;
  copy.hoarding_phase = 1;
  copy.file_count = files;
  copy.total_megabytes = megabytes;
  copy.payload = "Copied " + std::to_string(files) + " files (" + std::to_string(megabytes) +
                 " MB) from " + share + " to " + staging;
  out.push_back(label(std::move(copy), config, BehaviorKind::host_data_hoarding));

  auto pack = make_record(subject.name, Surface::host, "archive_created", start_day + 1,
                          after_hours());
  pack.department = subject.department;
  pack.hoarding_phase = 2;
  pack.total_megabytes = megabytes;
  pack.archive_tool = tool;
  pack.payload = "Created " + archive + " from " + staging + " using " +
                 std::string(to_string(tool));
  out.push_back(label(std::move(pack), config, BehaviorKind::host_data_hoarding));

  auto move = make_record(subject.name, Surface::host, "archive_moved", start_day + 2,
                          after_hours());
  move.department = subject.department;
  move.hoarding_phase = 3;
  move.hoarding_trail_start_day = start_day;
  move.total_megabytes = megabytes;
  move.destination = dest;
  move.payload = "Moved " + archive + " to " + std::string(to_string(dest));
  out.push_back(label(std::move(move), config, BehaviorKind::host_data_hoarding));
  return out;
}

std::vector<int> plan_hoarding_trails(const OrgState& org, const ThreatSubjectConfig& config,
                                      SeededRng rng) {
  std::vector<int> candidates;
  for (int d = config.onset_day; d + 2 <= org.config.sim_days; ++d)
    if (is_weekday(d)) candidates.push_back(d);
  std::vector<int> starts;
  for (int t = 0; t < org.config.hoarding_trails && !candidates.empty(); ++t) {
    const int s = candidates[rng.pick_index(candidates.size())];
    starts.push_back(s);
    candidates.erase(std::remove_if(candidates.begin(), candidates.end(),
                                    [s](int d) { return d > s - 3 && d < s + 3; }),
                     candidates.end());
  }
  std::sort(starts.begin(), starts.end());
  return starts;
}

SocialEngineeringPattern select_pattern(SeededRng& rng) {
  return static_cast<SocialEngineeringPattern>(rng.below(4));
}

Injected fire_social_engineering(const GenContext& ctx, std::size_t subject,
                                 const ThreatSubjectConfig& config, int day, SeededRng rng,
                                 SocialEngineeringBacklog& backlog) {
  auto pattern = select_pattern(rng);
  return fire_social_engineering(ctx, subject, config, day, rng, backlog, pattern);
}

Injected fire_social_engineering(const GenContext& ctx, std::size_t subject,
                                 const ThreatSubjectConfig& config, int day, SeededRng rng,
                                 SocialEngineeringBacklog& backlog,
                                 SocialEngineeringPattern pattern) {
  const auto& org = ctx.org;
  const auto& attacker = org.employees[subject];

  std::optional<std::size_t> target;
  if (pattern == SocialEngineeringPattern::vishing && org.config.vishing_victim) {
    target = org.index_of(*org.config.vishing_victim);
    if (target && org.employees[*target].is_subject) target.reset();
  }
  if (!target) target = pick_innocent(org, subject, rng);
  if (!target) {
    ctx.warnings.push_back("day " + std::to_string(day) + ": no innocent colleague for " +
                           std::string(to_string(pattern)) + " by " + attacker.name +
                           ", using spear_phishing");
    return spear_phish(ctx, attacker, config, day, rng, nullptr);
  }
  const auto& victim = org.employees[*target];

  switch (pattern) {
    case SocialEngineeringPattern::vishing:
      return vishing(ctx, subject, config, day, rng, victim);
    case SocialEngineeringPattern::spear_phishing:
      return spear_phish(ctx, attacker, config, day, rng, &victim);
    case SocialEngineeringPattern::slack_pretexting: {
      // Weakest tie: whoever the attacker is least connected to.
      double best = 2.0;
      std::vector<std::size_t> weakest;
      for (std::size_t i : org.innocents()) {
        if (i == subject) continue;
        double w = org.edge_weight(subject, i);
        if (w < best - 1e-12) {
          best = w;
          weakest = {i};
        } else if (std::abs(w - best) <= 1e-12) {
          weakest.push_back(i);
        }
      }
      const auto& mark = org.employees[weakest[rng.pick_index(weakest.size())]];
      if (org.is_incident_day(day)) return pretext(ctx, subject, day, day, mark.name);
      backlog.pretexts.push_back({subject, day, 0, mark.name});
      return {};
    }
    case SocialEngineeringPattern::trust_building: {
      std::vector<std::size_t> strangers;
      for (std::size_t i : org.innocents())
        if (i != subject && !org.employees[i].knows(attacker.name)) strangers.push_back(i);
      const auto& mark =
          strangers.empty() ? victim : org.employees[strangers[rng.pick_index(strangers.size())]];
      auto m = place_minute(ctx.quiet, attacker.name, day, 9 * 60, 17 * 60, rng);
      if (!m) return {};
      const int due = day + rng.uniform_int(3, 5);
      auto body = render(ctx, ProseSurface::email, attacker.name, "inbound_contact",
                         {{"counterparty", mark.name}, {"project", project(rng)}}, {}, rng);
      auto r = outbound_email(attacker, mark.name, "Nice to meet you", body, day, *m);
      r.sender_in_known_contacts = false;
      r.followup_due_day = due;
      backlog.followups.push_back({subject, day, due, mark.name});
      return {label(std::move(r), config, BehaviorKind::social_engineering)};
    }
  }
  return {};
}

Injected release_backlog(const GenContext& ctx, int day, SocialEngineeringBacklog& backlog) {
  const auto& org = ctx.org;
  Injected out;
  if (org.is_incident_day(day)) {
    for (const auto& p : backlog.pretexts)
      for (auto& g : pretext(ctx, p.subject, p.origin_day, day, p.target)) out.push_back(std::move(g));
    backlog.pretexts.clear();
  }
  std::vector<SocialEngineeringBacklog::Pending> later;
  for (const auto& f : backlog.followups) {
    if (f.due_day != day) {
      later.push_back(f);
      continue;
    }
    const auto& attacker = org.employees[f.subject];
    const auto* config = org.subject_config(attacker.name);
    auto rng = org.root.derive("followup", f.subject, static_cast<std::uint64_t>(f.origin_day));
    const auto& target = org.employee(f.target);
    const auto lookalike = std::string(rng.pick(catalog::kLookalikeDomains));
    auto m = place_minute(ctx.quiet, attacker.name, day, 9 * 60, 17 * 60, rng);
    if (!m) continue;
    auto body = render(ctx, ProseSurface::email, attacker.name, "followup",
                       {{"counterparty", target.name},
                        {"initial_day", std::to_string(f.origin_day)},
                        {"link", "https://" + lookalike + "/shared/doc"}},
                       {}, rng);
    auto r = outbound_email(attacker, target.name, "Re: Nice to meet you", body, day, *m);
    r.sender_in_known_contacts = false;
    r.reply_to_domain = lookalike;
    out.push_back(label(std::move(r), *config, BehaviorKind::social_engineering));
  }
  backlog.followups = std::move(later);
  return out;
}

}  // namespace orgforge
