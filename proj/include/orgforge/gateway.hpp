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

#include <chrono>
#include <memory>
#include <string>
#include <sys/types.h>

#include "orgforge/pipeline.hpp"
#include "orgforge/prose.hpp"

namespace orgforge {

/// Environment variable holding the gateway launch command.
inline constexpr const char* kGatewayEnv = "ORGFORGE_GATEWAY";

/// A gateway process spoken to over newline-delimited JSON on stdio.
///
/// Request:  {"id","role","prompt_id","prompt","context","model_id","temperature","max_tokens"}
/// Response: {"id","text"} or {"id","error":{"code","message"}}
class GatewayClient {
 public:
  /// Launches `command` through /bin/sh and performs a handshake. Throws
  /// AgentError when the process cannot be started or never answers.
  GatewayClient(const std::string& command, std::string model_id,
                std::chrono::milliseconds timeout = std::chrono::seconds(120));
  ~GatewayClient();
  GatewayClient(const GatewayClient&) = delete;
  GatewayClient& operator=(const GatewayClient&) = delete;

  /// Sends one request document (id and model_id are filled in) and returns the
  /// response text byte-exact. Throws AgentError on an error document.
  std::string call(json request);
  const std::string& model_id() const noexcept { return model_id_; }

 private:
  json exchange(const json& request);
  std::string read_line();

  std::string model_id_;
  std::chrono::milliseconds timeout_;
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
  std::uint64_t next_id_ = 0;
};

/// Agent backed by a gateway. Retries a failed call `retries` times.
class GatewayAgent final : public Agent {
 public:
  GatewayAgent(std::shared_ptr<GatewayClient> client, int retries = 1)
      : client_(std::move(client)), retries_(retries) {}
  std::string invoke(const AgentRequest& request) override;
  std::string model_id() const override { return client_->model_id(); }

 private:
  std::shared_ptr<GatewayClient> client_;
  int retries_;
};

/// Renderer that forwards proposals to a gateway under the "renderer" role.
/// Only the proposal crosses the boundary; the response text is the prose.
class ExternalRenderer final : public ProseRenderer {
 public:
  explicit ExternalRenderer(std::shared_ptr<GatewayClient> client) : client_(std::move(client)) {}
  std::string render(const ProseProposal& proposal) const override;
  std::string identity() const override { return "gateway:" + client_->model_id(); }
  bool stateless() const override { return false; }

 private:
  std::shared_ptr<GatewayClient> client_;
};

json proposal_to_json(const ProseProposal& p);

}  // namespace orgforge
