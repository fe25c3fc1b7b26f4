/******************************************************************************
 * Copyright 2026 The scegen Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *****************************************************************************/

#include <cstdlib>

#include <httplib.h>

#include "scegen/error.hpp"
#include "scegen/llm.hpp"

namespace scegen::llm {

namespace {

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path_prefix;
};

Endpoint split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw DomainError("base_url needs a scheme: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  Endpoint ep;
  ep.origin = url.substr(0, path_start);
  ep.path_prefix = path_start == std::string::npos ? "" : url.substr(path_start);
  while (!ep.path_prefix.empty() && ep.path_prefix.back() == '/') ep.path_prefix.pop_back();
  return ep;
}

}  // namespace

ProviderReply HttpProvider::send(const std::vector<ChatMessage>& conversation,
                                 const CompletionRequest&, const ProviderConfig& config) {
  if (network_forbidden()) {
    throw GatewayError(GatewayError::Kind::transport, "network access is disabled in this process");
  }
  const char* key = std::getenv(config.api_key_env.c_str());
  if (!key || !*key) {
    throw GatewayError(GatewayError::Kind::auth,
                       "environment variable " + config.api_key_env + " is not set");
  }

  const auto ep = split_url(config.base_url);
  httplib::Client client(ep.origin);
  const auto secs = static_cast<time_t>(config.timeout_seconds);
  client.set_connection_timeout(secs, 0);
  client.set_read_timeout(secs, 0);
  client.set_write_timeout(secs, 0);
  client.set_bearer_token_auth(key);

  nlohmann::json body = {{"model", config.model_name},
                         {"temperature", config.temperature},
                         {"response_format", {{"type", "json_object"}}},
                         {"messages", nlohmann::json::array()}};
  for (const auto& m : conversation) {
    body["messages"].push_back({{"role", m.role}, {"content", m.content}});
  }

  auto res = client.Post(ep.path_prefix + "/chat/completions", body.dump(), "application/json");
  if (!res) {
    throw GatewayError(GatewayError::Kind::transport,
                       "request to " + config.base_url + " failed: " + httplib::to_string(res.error()));
  }
  if (res->status == 401 || res->status == 403) {
    throw GatewayError(GatewayError::Kind::auth,
                       "provider rejected credentials (HTTP " + std::to_string(res->status) + ")",
                       {res->body});
  }
  if (res->status != 200) {
    throw GatewayError(GatewayError::Kind::transport,
                       "provider returned HTTP " + std::to_string(res->status), {res->body});
  }
  const auto reply = nlohmann::json::parse(res->body, nullptr, false);
  if (reply.is_discarded() || !reply.contains("choices") || reply["choices"].empty()) {
    throw GatewayError(GatewayError::Kind::transport, "unexpected provider payload", {res->body});
  }
  ProviderReply out;
  out.text = reply["choices"][0]["message"].value("content", "");
  if (reply.contains("usage")) {
    out.usage.prompt_tokens = reply["usage"].value("prompt_tokens", 0);
    out.usage.completion_tokens = reply["usage"].value("completion_tokens", 0);
  }
  return out;
}

}  // namespace scegen::llm
