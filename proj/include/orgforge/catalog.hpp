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

// Closed vocabularies. Every generated string is drawn from one of these,
// which keeps corpora reproducible and free of real identifiers.

#pragma once

#include <array>
#include <string_view>

namespace orgforge::catalog {

inline constexpr std::array<std::string_view, 96> kFirstNames{
    "Chris",   "Avery",   "Blake",   "Casey",   "Dana",    "Devon",   "Eli",     "Elena",
    "Farah",   "Felix",   "Gina",    "Grant",   "Hana",    "Hugo",    "Imani",   "Ivan",
    "Jamie",   "Jonah",   "Kai",     "Keira",   "Lena",    "Leo",     "Maya",    "Marco",
    "Nadia",   "Nico",    "Omar",    "Olive",   "Priya",   "Paolo",   "Quinn",   "Rafael",
    "Rina",    "Sam",     "Sofia",   "Theo",    "Tara",    "Uma",     "Victor",  "Vera",
    "Wes",     "Willa",   "Xavier",  "Yara",    "Yusuf",   "Zoe",     "Zane",    "Aria",
    "Bruno",   "Cleo",    "Dmitri",  "Esme",    "Finn",    "Greta",   "Hector",  "Iris",
    "Joel",    "Kenji",   "Lucia",   "Milo",    "Noor",    "Oscar",   "Petra",   "Reid",
    "Sasha",   "Tomas",   "Ulla",    "Vince",   "Wren",    "Yosef",   "Zara",    "Anika",
    "Boris",   "Celine",  "Dario",   "Edith",   "Fatima",  "Gideon",  "Helga",   "Ishaan",
    "Juno",    "Kofi",    "Lars",    "Mira",    "Nils",    "Opal",    "Pierce",  "Rosa",
    "Silas",   "Tess",    "Umar",    "Vida",    "Wade",    "Xena",    "Yuki",    "Zeke",
};

inline constexpr std::array<std::string_view, 8> kDepartments{
    "Engineering", "Finance", "Sales", "Legal", "HR", "Marketing", "Support", "Operations",
};

inline constexpr std::array<std::string_view, 8> kApplications{
    "okta-dashboard", "jira", "confluence", "github-enterprise",
    "workday",        "salesforce", "slack", "google-workspace",
};

inline constexpr std::array<std::string_view, 2> kCorporateRanges{"10.20.0.0/16", "10.44.0.0/16"};
inline constexpr std::array<std::string_view, 3> kResidentialPrefixes{"73.162.", "98.207.",
                                                                      "24.130."};
inline constexpr std::array<std::string_view, 2> kVpnPrefixes{"185.225.", "45.134."};

inline constexpr std::array<std::string_view, 4> kPersonalDomains{"gmail.com", "protonmail.com",
                                                                  "outlook.com", "yahoo.com"};
inline constexpr std::array<std::string_view, 4> kPartnerDomains{
    "northwind-partners.com", "contoso-logistics.com", "fabrikam.io", "tailspin-audit.com"};
inline constexpr std::array<std::string_view, 3> kLookalikeDomains{
    "it-helpdesk-support.net", "sso-verify-portal.com", "corp-account-review.net"};

inline constexpr std::array<std::string_view, 8> kProjects{
    "billing-v2", "atlas", "onboarding flow", "quarterly close",
    "search index", "mobile release", "payroll sync", "vendor portal",
};
inline constexpr std::array<std::string_view, 8> kRepos{
    "billing-service", "atlas-web", "infra-terraform", "data-pipeline",
    "mobile-app",      "auth-gateway", "reporting-etl", "design-system",
};
inline constexpr std::array<std::string_view, 6> kShares{
    "\\\\fs01\\finance", "\\\\fs01\\legal", "\\\\fs02\\hr-records",
    "\\\\fs02\\sales-pipeline", "\\\\fs03\\engineering", "\\\\fs03\\board",
};

/// Vague internal-data references used by outbound exfiltration mail.
inline constexpr std::array<std::string_view, 5> kVagueDataPhrases{
    "the customer list we talked about",
    "those files from the shared drive",
    "the numbers from the board deck",
    "the stuff from the pricing folder",
    "a copy of the vendor contracts",
};

/// Passive-aggressive framing for disgruntled sentiment drift. Entry 0 is the reference.
struct Framing {
  std::string_view prefix;
  std::string_view suffix;
};
inline constexpr std::array<Framing, 5> kPassiveAggressive{{
    {"Fine.", "Not that anyone reads these."},
    {"As I already said,", "Per my last message."},
    {"Apparently this is on me now.", ""},
    {"", "Whatever works for management, I guess."},
    {"Sure.", "Not like my input matters."},
}};

/// Affective tokens removed by the neutral rewrite (compared case-insensitively).
inline constexpr std::array<std::string_view, 24> kSentimentLexicon{
    "so",     "excited", "great",     "awesome", "love",   "happy",   "thrilled", "amazing",
    "thanks", "glad",    "really",    "super",   "finally", "frustrated", "annoyed", "hate",
    "ugh",    "sad",     "wonderful", "yay",     "fantastic", "loving", "proud",   "stoked",
};
inline constexpr std::array<std::string_view, 6> kEmoji{":)", ":D", ":(", ":-)", ";)", "<3"};

/// Words that must never appear in prose meant to look innocuous.
inline constexpr std::array<std::string_view, 8> kThreatKeywords{
    "exfil", "leak", "steal", "password", "credential", "secret", "dump", "revenge",
};

}  // namespace orgforge::catalog
