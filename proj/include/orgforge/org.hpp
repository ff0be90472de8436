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

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "orgforge/config.hpp"
#include "orgforge/rng.hpp"
#include "orgforge/types.hpp"

namespace orgforge {

struct Device {
  std::string id;
  Platform platform = Platform::ios;
  friend bool operator==(const Device&, const Device&) = default;
};

/// Per-actor baseline that authentication anomalies are judged against.
struct DeviceProfile {
  std::vector<Device> devices;                   // non-empty
  std::vector<MfaMethod> mfa_methods;            // non-empty, sorted
  std::vector<std::string> corporate_ip_ranges;  // CIDR prefixes

  bool knows_device(const std::string& id) const;
  bool uses_platform(Platform p) const;
  bool uses_mfa(MfaMethod m) const;
  friend bool operator==(const DeviceProfile&, const DeviceProfile&) = default;
};

struct Employee {
  std::string name;
  std::string department;
  DeviceProfile device_profile;
  std::vector<std::string> known_contacts;  // sorted
  bool is_subject = false;                  // engine-internal
  std::optional<std::size_t> subject_index;

  bool knows(const std::string& other) const;
};

struct SocialEdge {
  std::size_t a;
  std::size_t b;
  double weight;
};

struct OrgState {
  SimConfig config;
  std::vector<Employee> employees;  // sorted by name
  std::vector<std::string> departments;
  std::vector<SocialEdge> edges;    // a < b, sorted
  std::vector<bool> incident_days;  // index 0 unused
  SeededRng root{0};

  const Employee& employee(const std::string& name) const;
  std::optional<std::size_t> index_of(const std::string& name) const;
  double edge_weight(std::size_t a, std::size_t b) const;
  bool is_incident_day(int day) const;
  std::vector<std::size_t> innocents() const;
  const ThreatSubjectConfig* subject_config(const std::string& name) const;
};

/// Builds the population. Validates the config first.
OrgState init_org(const SimConfig& config);

/// Canonical JSON rendering of the full state (subject marks included).
std::string org_to_json(const OrgState& org);

/// Corporate address inside one of the profile's ranges.
std::string corporate_ip(const DeviceProfile& profile, SeededRng& rng);
std::string residential_ip(SeededRng& rng);
std::string vpn_ip(SeededRng& rng);
std::string new_device_id(Platform platform, SeededRng& rng);

}  // namespace orgforge
