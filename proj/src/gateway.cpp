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

#include "orgforge/gateway.hpp"

#include <cerrno>
#include <csignal>
#include <cstring>
#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include "orgforge/errors.hpp"

namespace orgforge {
namespace {

void write_all(int fd, std::string_view data) {
  while (!data.empty()) {
    const ssize_t n = ::write(fd, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      throw AgentError(std::string("gateway write failed: ") + std::strerror(errno));
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

}  // namespace

GatewayClient::GatewayClient(const std::string& command, std::string model_id,
                             std::chrono::milliseconds timeout)
    : model_id_(std::move(model_id)), timeout_(timeout) {
  if (command.empty()) throw AgentError("gateway command is empty; set " + std::string(kGatewayEnv));
  int in_pipe[2], out_pipe[2];
  if (::pipe(in_pipe) != 0 || ::pipe(out_pipe) != 0)
    throw AgentError(std::string("cannot create gateway pipes: ") + std::strerror(errno));
  // A write to a dead gateway must surface as an error, not kill the process.
  std::signal(SIGPIPE, SIG_IGN);
  pid_ = ::fork();
  if (pid_ < 0) throw AgentError(std::string("cannot fork gateway: ") + std::strerror(errno));
  if (pid_ == 0) {
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    ::close(out_pipe[1]);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  ::fcntl(to_child_, F_SETFD, FD_CLOEXEC);
  ::fcntl(from_child_, F_SETFD, FD_CLOEXEC);

  // Any well-formed reply proves the bridge is reachable; an error document is fine.
  json hello{{"id", "handshake"}, {"role", "ping"}, {"model_id", model_id_}};
  try {
    exchange(hello);
  } catch (const AgentError& e) {
    throw AgentError(std::string("gateway unreachable: ") + e.what());
  }
}

GatewayClient::~GatewayClient() {
  if (to_child_ >= 0) ::close(to_child_);
  if (from_child_ >= 0) ::close(from_child_);
  if (pid_ > 0) {
    int status = 0;
    for (int i = 0; i < 50; ++i) {
      if (::waitpid(pid_, &status, WNOHANG) != 0) return;
      ::usleep(10000);
    }
    ::kill(pid_, SIGTERM);
    ::waitpid(pid_, &status, 0);
  }
}

std::string GatewayClient::read_line() {
  const auto deadline = std::chrono::steady_clock::now() + timeout_;
  for (;;) {
    if (auto nl = buffer_.find('\n'); nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return line;
    }
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) throw AgentError("gateway timed out");
    pollfd p{from_child_, POLLIN, 0};
    const int ready = ::poll(&p, 1, static_cast<int>(left.count()));
    if (ready < 0 && errno == EINTR) continue;
    if (ready <= 0) throw AgentError("gateway timed out");
    char chunk[65536];
    const ssize_t n = ::read(from_child_, chunk, sizeof chunk);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) throw AgentError("gateway closed its output");
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

json GatewayClient::exchange(const json& request) {
  write_all(to_child_, request.dump() + "\n");
  const auto id = request.at("id");
  for (;;) {
    auto line = read_line();
    auto doc = json::parse(line, nullptr, false);
    if (doc.is_discarded() || !doc.is_object())
      throw AgentError("gateway sent a malformed line: " + line.substr(0, 200));
    if (doc.value("id", json()) == id) return doc;
  }
}

std::string GatewayClient::call(json request) {
  request["id"] = "req-" + std::to_string(next_id_++);
  request["model_id"] = model_id_;
  const auto doc = exchange(request);
  if (doc.contains("error")) {
    const auto& e = doc["error"];
    throw AgentError("gateway error " + e.value("code", std::string("unknown")) + ": " +
                     e.value("message", std::string{}));
  }
  if (!doc.contains("text") || !doc["text"].is_string())
    throw AgentError("gateway response has no text");
  return doc["text"].get<std::string>();
}

std::string GatewayAgent::invoke(const AgentRequest& request) {
  json doc{{"role", std::string(to_string(request.role))},
           {"prompt_id", request.prompt_id},
           {"prompt", request.prompt},
           {"context", request.context},
           {"temperature", request.temperature},
           {"max_tokens", request.max_tokens}};
  for (int attempt = 0;; ++attempt) {
    try {
      return client_->call(doc);
    } catch (const AgentError&) {
      if (attempt >= retries_) throw;
    }
  }
}

json proposal_to_json(const ProseProposal& p) {
  json slots = json::object();
  for (const auto& [k, v] : p.slots) slots[k] = v;
  return {{"surface", std::string(to_string(p.surface))},
          {"actor", p.actor},
          {"intent", p.intent},
          {"slots", slots},
          {"required_embeds", p.required_embeds},
          {"seed", p.seed}};
}

std::string ExternalRenderer::render(const ProseProposal& proposal) const {
  json doc{{"role", "renderer"},
           {"prompt_id", "renderer/" + std::string(to_string(proposal.surface))},
           {"prompt", "Write the message described by the proposal."},
           {"context", proposal_to_json(proposal)},
           {"temperature", 0.0},
           {"max_tokens", 4096}};
  try {
    return client_->call(doc);
  } catch (const AgentError& e) {
    throw RenderError(std::string("external renderer: ") + e.what());
  }
}

}  // namespace orgforge
