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

#include <string>
#include <vector>

#include "orgforge/config.hpp"
#include "orgforge/org.hpp"
#include "orgforge/prose.hpp"
#include "orgforge/record.hpp"

namespace orgforge {

/// A finished run: the labeled ledger in stream order plus generation warnings.
struct Corpus {
  OrgState org;
  std::vector<GroundTruthRecord> ledger;
  std::vector<std::string> warnings;

  /// The ledger with labels stripped.
  std::vector<ObservableRecord> observable() const;
  /// First day on which any subject is active; sim_days + 1 with no subjects.
  int clean_period_end() const;
  /// Records strictly before clean_period_end().
  std::vector<ObservableRecord> baseline() const;
};

Corpus run_simulation(const SimConfig& config, const ProseRenderer& renderer);
Corpus run_simulation(const SimConfig& config);

/// True iff both ledgers agree on everything except prose payloads.
bool verify_boundary(const Corpus& a, const Corpus& b);

}  // namespace orgforge
