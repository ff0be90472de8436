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

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "orgforge/rng.hpp"

namespace orgforge {

enum class ProseSurface { slack, email, pr_description, confluence };

/// What the engine asks a renderer to write. Carries no handle to engine state.
struct ProseProposal {
  ProseSurface surface = ProseSurface::slack;
  std::string actor;
  std::string intent;
  std::map<std::string, std::string> slots;
  std::vector<std::string> required_embeds;
  std::uint64_t seed = 0;
};

inline constexpr std::size_t kSlackMaxChars = 280;

/// Renders prose for a proposal. Implementations see only the proposal.
class ProseRenderer {
 public:
  virtual ~ProseRenderer() = default;
  virtual std::string render(const ProseProposal& proposal) const = 0;
  virtual std::string identity() const = 0;
  virtual bool stateless() const { return true; }
};

/// Reference renderer: seeded template selection and slot filling.
class TemplateRenderer final : public ProseRenderer {
 public:
  std::string render(const ProseProposal& proposal) const override;
  std::string identity() const override { return "template"; }
};

/// Throws RenderError when no template exists for (surface, intent) or a slot is missing.
std::string render_template(const ProseProposal& proposal, SeededRng& rng);

/// Intents the template catalog covers for a surface.
std::vector<std::string> template_intents(ProseSurface surface);

/// Appends any required embed that `text` does not already contain verbatim.
std::string ensure_embeds(std::string text, const std::vector<std::string>& embeds);

std::string_view to_string(ProseSurface s) noexcept;

}  // namespace orgforge
