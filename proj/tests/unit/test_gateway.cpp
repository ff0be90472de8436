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

// The primary's side of the line-delimited gateway protocol, exercised against
// the fake_gateway helper.

#include <gtest/gtest.h>

#include <chrono>
#include <fstream>
#include <memory>

#include "orgforge/cli.hpp"
#include "orgforge/errors.hpp"
#include "orgforge/gateway.hpp"
#include "orgforge/simulation.hpp"
#include "test_support.hpp"

namespace orgforge {
namespace {

namespace fs = std::filesystem;
using orgforge::testing::TempDir;
using namespace std::chrono_literals;

std::string gateway(const std::string& mode, const fs::path& log = {}) {
  std::string cmd = std::string("'") + ORGFORGE_FAKE_GATEWAY + "' " + mode;
  if (!log.empty()) cmd += " '" + log.string() + "'";
  return cmd;
}

std::vector<json> logged(const fs::path& log) {
  std::vector<json> out;
  std::ifstream in(log);
  for (std::string line; std::getline(in, line);) out.push_back(json::parse(line, nullptr, false));
  return out;
}

AgentRequest request(std::string prompt) {
  AgentRequest r;
  r.role = AgentRole::triage;
  r.prompt_id = "official/triage";
  r.prompt = std::move(prompt);
  r.context = json{{"window", "days 1-7"}};
  return r;
}

TEST(GatewayClientTest, EchoRoundTripIsByteExact) {
  auto client = std::make_shared<GatewayClient>(gateway("echo"), "echo-model");
  GatewayAgent agent(client);
  EXPECT_EQ(agent.model_id(), "echo-model");
  const std::string text = "line one\nline \"two\"\té {\"x\": [1]}";
  EXPECT_EQ(agent.invoke(request(text)), text);
  EXPECT_EQ(agent.invoke(request("")), "");
}

TEST(GatewayClientTest, RequestCarriesDeterministicSamplingAndIds) {
  TempDir tmp("gwlog");
  const auto log = tmp.path() / "requests.jsonl";
  {
    auto client = std::make_shared<GatewayClient>(gateway("echo", log), "m1");
    GatewayAgent agent(client);
    agent.invoke(request("a"));
    agent.invoke(request("b"));
  }
  const auto lines = logged(log);
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0]["role"], "ping");
  std::set<std::string> ids;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& r = lines[i];
    EXPECT_EQ(r["model_id"], "m1");
    EXPECT_EQ(r["role"], "triage");
    EXPECT_EQ(r["prompt_id"], "official/triage");
    EXPECT_EQ(r["temperature"].get<double>(), 0.0);
    EXPECT_EQ(r["max_tokens"].get<int>(), 4096);
    EXPECT_EQ(r["context"]["window"], "days 1-7");
    ids.insert(r["id"].get<std::string>());
  }
  EXPECT_EQ(ids.size(), 2u);
}

TEST(GatewayClientTest, ErrorDocumentBecomesAgentError) {
  auto client = std::make_shared<GatewayClient>(gateway("error"), "m");
  GatewayAgent agent(client, 0);
  try {
    agent.invoke(request("x"));
    FAIL() << "expected AgentError";
  } catch (const AgentError& e) {
    EXPECT_NE(std::string(e.what()).find("throttled"), std::string::npos);
  }
  // The bridge survives and keeps answering.
  EXPECT_THROW(agent.invoke(request("y")), AgentError);
}

TEST(GatewayClientTest, MalformedReplyLineIsAnAgentError) {
  const std::string fake = std::string("'") + ORGFORGE_FAKE_GATEWAY + "' echo";
  EXPECT_THROW(GatewayClient("printf 'not json\\n'; exec " + fake, "m", 5s), AgentError);
}

TEST(GatewayClientTest, RepliesWithOtherIdsAreSkipped) {
  const std::string fake = std::string("'") + ORGFORGE_FAKE_GATEWAY + "' echo";
  auto client = std::make_shared<GatewayClient>(
      "printf '{\"id\":\"stale\",\"text\":\"old\"}\\n'; exec " + fake, "m", 5s);
  GatewayAgent agent(client);
  EXPECT_EQ(agent.invoke(request("fresh")), "fresh");
}

TEST(GatewayClientTest, UnreachableOrSilentGatewayFailsAtHandshake) {
  EXPECT_THROW(GatewayClient("", "m"), AgentError);
  EXPECT_THROW(GatewayClient("exit 3", "m", 2s), AgentError);
  EXPECT_THROW(GatewayClient("/nonexistent/gateway-binary", "m", 2s), AgentError);
  const auto t0 = std::chrono::steady_clock::now();
  EXPECT_THROW(GatewayClient(gateway("silent"), "m", 300ms), AgentError);
  EXPECT_LT(std::chrono::steady_clock::now() - t0, 5s);
}

TEST(GatewayEvaluateTest, UnreachableGatewayFailsBeforeAnyStage) {
  TempDir tmp("gweval");
  SimConfig c = reference_config(3);
  cmd_generate(c, tmp.path() / "corpus");
  EvaluateOptions o;
  o.agent = "gateway:some-model";
  o.gateway_command = "exit 1";
  EXPECT_THROW(cmd_evaluate(tmp.path() / "corpus", tmp.path() / "run", o), AgentError);
  EXPECT_FALSE(fs::exists(tmp.path() / "run" / "run.json"));

  o.gateway_command.clear();
  ::unsetenv(kGatewayEnv);
  EXPECT_THROW(cmd_evaluate(tmp.path() / "corpus", tmp.path() / "run", o), AgentError);
}

TEST(GatewayEvaluateTest, RuleAgentBehindGatewayMatchesInProcessRun) {
  TempDir tmp("gwrule");
  cmd_generate(reference_config(3), tmp.path() / "corpus");
  EvaluateOptions direct;
  EvaluateOptions bridged;
  bridged.agent = "gateway:bridged-rule";
  bridged.gateway_command = gateway("rule");
  cmd_evaluate(tmp.path() / "corpus", tmp.path() / "direct", direct);
  cmd_evaluate(tmp.path() / "corpus", tmp.path() / "bridged", bridged);
  auto a = cmd_score(tmp.path() / "direct")["report"];
  auto b = cmd_score(tmp.path() / "bridged")["report"];
  EXPECT_EQ(a, b);
  EXPECT_EQ(cmd_score(tmp.path() / "bridged")["model_id"], "bridged-rule");
  EXPECT_DOUBLE_EQ(b["verdict"]["f1"].get<double>(), 1.0);
}

TEST(ExternalRendererTest, ProposalSentAsContext) {
  TempDir tmp("gwrender");
  const auto log = tmp.path() / "log.jsonl";
  auto client = std::make_shared<GatewayClient>(gateway("echo", log), "writer");
  ExternalRenderer r(client);
  EXPECT_EQ(r.identity(), "gateway:writer");
  EXPECT_FALSE(r.stateless());
  ProseProposal p;
  p.surface = ProseSurface::slack;
  p.actor = "Tasha";
  p.intent = "status_update";
  p.slots = {{"project", "billing"}};
  p.required_embeds = {"PR-12"};
  p.seed = 9;
  EXPECT_EQ(r.render(p), "Write the message described by the proposal.");
  const auto lines = logged(log);
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[1]["role"], "renderer");
  EXPECT_EQ(lines[1]["context"], proposal_to_json(p));
  EXPECT_EQ(lines[1]["context"]["slots"]["project"], "billing");
}

TEST(ExternalRendererTest, GatewayErrorBecomesRenderError) {
  auto client = std::make_shared<GatewayClient>(gateway("error"), "writer");
  ExternalRenderer r(client);
  EXPECT_THROW(r.render(ProseProposal{}), RenderError);
}

TEST(ExternalRendererTest, SimulationStructureIndependentOfRenderer) {
  SimConfig c = reference_config(5);
  c.sim_days = 21;
  c.population_size = 12;
  auto client = std::make_shared<GatewayClient>(gateway("echo"), "writer");
  ExternalRenderer external(client);
  EXPECT_TRUE(verify_boundary(run_simulation(c), run_simulation(c, external)));
}

}  // namespace
}  // namespace orgforge
