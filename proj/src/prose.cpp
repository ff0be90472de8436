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

#include "orgforge/prose.hpp"

#include <array>

#include "orgforge/errors.hpp"

namespace orgforge {
namespace {

struct TemplateSet {
  ProseSurface surface;
  std::string_view intent;
  std::vector<std::string_view> variants;
};

const std::vector<TemplateSet>& templates() {
  static const std::vector<TemplateSet> kTemplates{
      {ProseSurface::slack,
       "status_update",
       {"Shipped the fix.", "So excited this works!!", "Great progress on {project} today :)",
        "Pushed the {project} changes, thanks all!", "Reviewing {ticket} now.",
        "Heads down on {project} this afternoon.", "Finally got {project} building again!",
        "Standup notes for {project} are in the doc."}},
      {ProseSurface::slack,
       "incident_chatter",
       {"Seeing elevated errors on {project}, looking now.",
        "Incident bridge is up for {project}.",
        "Rolled back the last {project} deploy, monitoring."}},
      {ProseSurface::slack,
       "impersonation",
       {"Hi {counterparty}, this is {impersonated} from IT. While we work the {project} incident "
        "please approve the sign-in prompt I am sending you.",
        "Hey {counterparty}, {impersonated} on the service desk here. The {project} outage needs "
        "your account re-verified, can you read me the code you just got?"}},
      {ProseSurface::email,
       "outbound_note",
       {"Hi {counterparty}, attaching the {project} summary for this week. Let me know if "
        "anything is missing.",
        "Hi {counterparty}, quick reminder that the {project} review moved to Thursday.",
        "Hi {counterparty}, notes from today's {project} sync are below."}},
      {ProseSurface::email,
       "inbound_contact",
       {"Hi {counterparty}, we met briefly at the {project} meetup. Would be great to compare "
        "notes sometime.",
        "Hello {counterparty}, a colleague suggested I reach out about {project}. Happy to share "
        "what we have learned."}},
      {ProseSurface::email,
       "followup",
       {"Hi {counterparty}, following up on my note from day {initial_day}. Could you look over "
        "the document at {link} before end of day?",
        "Hi {counterparty}, circling back on our earlier chat. The file is at {link}, it needs "
        "your sign-in to open."}},
      {ProseSurface::email,
       "credential_lure",
       {"Your {app} session has expired. Reply with the verification code sent to your phone to "
        "keep access.",
        "Action required: confirm your {app} account at {link} within 24 hours."}},
      {ProseSurface::email,
       "personal_forward",
       {"Sending {data_phrase} so I can go through it from home.",
        "Here is {data_phrase}, will look at it over the weekend.",
        "Forwarding {data_phrase} for later."}},
      {ProseSurface::pr_description,
       "review_comment",
       {"Refactors {repo} config loading.", "Adds retries to the {repo} client.",
        "Fixes flaky test in {repo}.", "Bumps dependencies for {repo}."}},
      {ProseSurface::pr_description,
       "fixture_change",
       {"Adds integration test for the {repo} upload path.\n# test fixture: {embed}",
        "Local env notes for {repo}, remove before merge. {embed}"}},
      {ProseSurface::confluence,
       "status_update",
       {"Weekly notes for {project}: on track.", "{project} retro: action items assigned."}},
  };
  return kTemplates;
}

std::string fill(std::string_view tpl, const ProseProposal& p) {
  std::string out;
  std::size_t i = 0;
  while (i < tpl.size()) {
    if (tpl[i] != '{') {
      out.push_back(tpl[i++]);
      continue;
    }
    auto close = tpl.find('}', i);
    if (close == std::string_view::npos) throw RenderError("unterminated slot in template");
    auto key = std::string(tpl.substr(i + 1, close - i - 1));
    if (key == "embed") {
      for (std::size_t k = 0; k < p.required_embeds.size(); ++k) {
        if (k) out.push_back(' ');
        out += p.required_embeds[k];
      }
    } else {
      auto it = p.slots.find(key);
      if (it == p.slots.end()) throw RenderError("template slot '" + key + "' not provided");
      out += it->second;
    }
    i = close + 1;
  }
  return out;
}

}  // namespace

std::string_view to_string(ProseSurface s) noexcept {
  switch (s) {
    case ProseSurface::slack: return "slack";
    case ProseSurface::email: return "email";
    case ProseSurface::pr_description: return "pr_description";
    case ProseSurface::confluence: return "confluence";
  }
  return "?";
}

std::vector<std::string> template_intents(ProseSurface surface) {
  std::vector<std::string> out;
  for (const auto& t : templates())
    if (t.surface == surface) out.emplace_back(t.intent);
  return out;
}

std::string ensure_embeds(std::string text, const std::vector<std::string>& embeds) {
  for (const auto& e : embeds) {
    if (e.empty() || text.find(e) != std::string::npos) continue;
    if (!text.empty()) text.push_back(' ');
    text += e;
  }
  return text;
}

std::string render_template(const ProseProposal& p, SeededRng& rng) {
  for (const auto& t : templates()) {
    if (t.surface != p.surface || t.intent != p.intent) continue;
    auto text = ensure_embeds(fill(rng.pick(t.variants), p), p.required_embeds);
    if (p.surface == ProseSurface::slack && text.size() > kSlackMaxChars)
      text.resize(kSlackMaxChars);
    return text;
  }
  throw RenderError("no template for " + std::string(to_string(p.surface)) + "/" + p.intent);
}

std::string TemplateRenderer::render(const ProseProposal& proposal) const {
  SeededRng rng(proposal.seed);
  return render_template(proposal, rng);
}

}  // namespace orgforge
