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

#include "orgforge/org.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>
#include <set>
#include <stdexcept>

#include "orgforge/catalog.hpp"
#include "orgforge/clock.hpp"

namespace orgforge {
namespace {

template <typename T>
void shuffle(std::vector<T>& v, SeededRng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.pick_index(i)]);
}

std::string hex_suffix(SeededRng& rng, int digits) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (int i = 0; i < digits; ++i) out.push_back(kHex[rng.below(16)]);
  return out;
}

Platform pick_laptop(SeededRng& rng) {
  double u = rng.uniform01();
  if (u < 0.50) return Platform::macos;
  if (u < 0.85) return Platform::windows;
  return Platform::linux_;
}

DeviceProfile make_profile(SeededRng rng) {
  DeviceProfile p;
  Platform phone = rng.bernoulli(0.6) ? Platform::ios : Platform::android;
  p.devices.push_back({new_device_id(phone, rng), phone});
  if (rng.bernoulli(0.85)) {
    Platform laptop = pick_laptop(rng);
    p.devices.push_back({new_device_id(laptop, rng), laptop});
  }
  p.mfa_methods.push_back(rng.bernoulli(0.7) ? MfaMethod::push : MfaMethod::sms);
  if (rng.bernoulli(0.15)) p.mfa_methods.push_back(MfaMethod::totp);
  std::sort(p.mfa_methods.begin(), p.mfa_methods.end());
  auto first = rng.pick_index(catalog::kCorporateRanges.size());
  p.corporate_ip_ranges.emplace_back(catalog::kCorporateRanges[first]);
  if (rng.bernoulli(0.3)) {
    p.corporate_ip_ranges.emplace_back(catalog::kCorporateRanges[1 - first]);
    std::sort(p.corporate_ip_ranges.begin(), p.corporate_ip_ranges.end());
  }
  return p;
}

std::vector<std::string> choose_innocent_names(const SimConfig& c, SeededRng rng) {
  std::set<std::string> taken;
  for (const auto& s : c.subjects) taken.insert(s.name);
  const std::size_t needed = static_cast<std::size_t>(c.population_size) - c.subjects.size();

  std::vector<std::string> chosen;
  if (c.vishing_victim && needed > 0) {
    chosen.push_back(*c.vishing_victim);
    taken.insert(*c.vishing_victim);
  }
  std::vector<std::string> pool;
  for (auto n : catalog::kFirstNames)
    if (!taken.count(std::string(n))) pool.emplace_back(n);
  shuffle(pool, rng);
  for (std::size_t i = 0; chosen.size() < needed && i < pool.size(); ++i) chosen.push_back(pool[i]);
  // Past the catalog, fall back to numbered names.
  for (std::size_t k = 2; chosen.size() < needed; ++k) {
    for (auto n : catalog::kFirstNames) {
      if (chosen.size() >= needed) break;
      auto candidate = std::string(n) + " " + std::to_string(k);
      if (!taken.count(candidate)) chosen.push_back(candidate);
    }
  }
  return chosen;
}

}  // namespace

bool DeviceProfile::knows_device(const std::string& id) const {
  return std::any_of(devices.begin(), devices.end(), [&](const Device& d) { return d.id == id; });
}
bool DeviceProfile::uses_platform(Platform p) const {
  return std::any_of(devices.begin(), devices.end(),
                     [&](const Device& d) { return d.platform == p; });
}
bool DeviceProfile::uses_mfa(MfaMethod m) const {
  return std::find(mfa_methods.begin(), mfa_methods.end(), m) != mfa_methods.end();
}

bool Employee::knows(const std::string& other) const {
  return std::binary_search(known_contacts.begin(), known_contacts.end(), other);
}

const Employee& OrgState::employee(const std::string& name) const {
  auto i = index_of(name);
  if (!i) throw std::out_of_range("no employee named '" + name + "'");
  return employees[*i];
}

std::optional<std::size_t> OrgState::index_of(const std::string& name) const {
  auto it = std::lower_bound(employees.begin(), employees.end(), name,
                             [](const Employee& e, const std::string& n) { return e.name < n; });
  if (it == employees.end() || it->name != name) return std::nullopt;
  return static_cast<std::size_t>(it - employees.begin());
}

double OrgState::edge_weight(std::size_t a, std::size_t b) const {
  if (a > b) std::swap(a, b);
  auto it = std::lower_bound(edges.begin(), edges.end(), std::pair{a, b},
                             [](const SocialEdge& e, const std::pair<std::size_t, std::size_t>& k) {
                               return std::pair{e.a, e.b} < k;
                             });
  if (it == edges.end() || it->a != a || it->b != b) return 0.0;
  return it->weight;
}

bool OrgState::is_incident_day(int day) const {
  return day >= 1 && static_cast<std::size_t>(day) < incident_days.size() && incident_days[day];
}

std::vector<std::size_t> OrgState::innocents() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < employees.size(); ++i)
    if (!employees[i].is_subject) out.push_back(i);
  return out;
}

const ThreatSubjectConfig* OrgState::subject_config(const std::string& name) const {
  for (const auto& s : config.subjects)
    if (s.name == name) return &s;
  return nullptr;
}

OrgState init_org(const SimConfig& config) {
  validate(config);
  OrgState org;
  org.config = config;
  org.root = SeededRng(config.seed);
  const SeededRng org_rng = org.root.derive("org");

  for (const auto& name : choose_innocent_names(config, org_rng.derive("names")))
    org.employees.push_back({name, {}, {}, {}, false, std::nullopt});
  for (std::size_t i = 0; i < config.subjects.size(); ++i)
    org.employees.push_back({config.subjects[i].name, {}, {}, {}, true, i});
  std::sort(org.employees.begin(), org.employees.end(),
            [](const Employee& a, const Employee& b) { return a.name < b.name; });

  const auto n = org.employees.size();
  const std::size_t dept_count =
      std::clamp<std::size_t>(n / 6, 1, catalog::kDepartments.size());
  for (std::size_t d = 0; d < dept_count; ++d)
    org.departments.emplace_back(catalog::kDepartments[d]);

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  auto dept_rng = org_rng.derive("departments");
  shuffle(order, dept_rng);
  for (std::size_t k = 0; k < n; ++k)
    org.employees[order[k]].department = org.departments[k % dept_count];

  for (std::size_t i = 0; i < n; ++i)
    org.employees[i].device_profile = make_profile(org_rng.derive("devices", i));

  // Same-department pairs are strong ties; a few weak ties cross departments.
  std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
  auto graph_rng = org_rng.derive("graph");
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (org.employees[a].department == org.employees[b].department)
        w[a][b] = w[b][a] = 0.5 + 0.5 * graph_rng.uniform01();
  for (std::size_t a = 0; a < n && dept_count > 1; ++a) {
    for (int k = 0; k < 2; ++k) {
      auto b = graph_rng.pick_index(n);
      if (b == a || org.employees[a].department == org.employees[b].department) continue;
      w[a][b] = w[b][a] = 0.05 + 0.25 * graph_rng.uniform01();
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (w[a][b] <= 0.0) continue;
      if (a < b) org.edges.push_back({a, b, w[a][b]});
      org.employees[a].known_contacts.push_back(org.employees[b].name);
    }
    std::sort(org.employees[a].known_contacts.begin(), org.employees[a].known_contacts.end());
  }

  org.incident_days.assign(static_cast<std::size_t>(config.sim_days) + 1, false);
  for (int d = 1; d <= config.sim_days; ++d) {
    auto r = org.root.derive("incident", static_cast<std::uint64_t>(d));
    org.incident_days[d] = is_weekday(d) && r.bernoulli(config.incident_rate);
  }
  return org;
}

std::string org_to_json(const OrgState& org) {
  nlohmann::ordered_json j;
  j["config"] = nlohmann::ordered_json::parse(config_to_json(org.config));
  j["departments"] = org.departments;
  auto emps = nlohmann::ordered_json::array();
  for (const auto& e : org.employees) {
    nlohmann::ordered_json ej;
    ej["name"] = e.name;
    ej["department"] = e.department;
    auto devs = nlohmann::ordered_json::array();
    for (const auto& d : e.device_profile.devices)
      devs.push_back({{"id", d.id}, {"platform", to_string(d.platform)}});
    ej["devices"] = devs;
    auto mfa = nlohmann::ordered_json::array();
    for (auto m : e.device_profile.mfa_methods) mfa.push_back(to_string(m));
    ej["mfa_methods"] = mfa;
    ej["corporate_ip_ranges"] = e.device_profile.corporate_ip_ranges;
    ej["known_contacts"] = e.known_contacts;
    ej["is_subject"] = e.is_subject;
    emps.push_back(ej);
  }
  j["employees"] = emps;
  auto edges = nlohmann::ordered_json::array();
  for (const auto& e : org.edges) edges.push_back({e.a, e.b, e.weight});
  j["edges"] = edges;
  auto incidents = nlohmann::ordered_json::array();
  for (int d = 1; d < static_cast<int>(org.incident_days.size()); ++d)
    if (org.incident_days[d]) incidents.push_back(d);
  j["incident_days"] = incidents;
  return j.dump();
}

std::string corporate_ip(const DeviceProfile& profile, SeededRng& rng) {
  const auto& range = profile.corporate_ip_ranges[rng.pick_index(profile.corporate_ip_ranges.size())];
  // Ranges are /16: keep the first two octets.
  auto second_dot = range.find('.', range.find('.') + 1);
  return range.substr(0, second_dot + 1) + std::to_string(rng.uniform_int(0, 255)) + "." +
         std::to_string(rng.uniform_int(1, 254));
}

std::string residential_ip(SeededRng& rng) {
  return std::string(rng.pick(catalog::kResidentialPrefixes)) +
         std::to_string(rng.uniform_int(0, 255)) + "." + std::to_string(rng.uniform_int(1, 254));
}

std::string vpn_ip(SeededRng& rng) {
  return std::string(rng.pick(catalog::kVpnPrefixes)) +
         std::to_string(rng.uniform_int(0, 255)) + "." + std::to_string(rng.uniform_int(1, 254));
}

std::string new_device_id(Platform platform, SeededRng& rng) {
  return std::string(to_string(platform)) + "-" + hex_suffix(rng, 6);
}

}  // namespace orgforge
