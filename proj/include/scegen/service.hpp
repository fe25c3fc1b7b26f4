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

#pragma once

// Session-based HTTP/JSON API over the pipeline. Service::handle is
// transport-free so it can be exercised without sockets; http_server.hpp
// binds it to a listening port.

#include <map>
#include <memory>
#include <string>

#include "scegen/llm.hpp"
#include "scegen/params.hpp"
#include "scegen/session_store.hpp"

namespace scegen::service {

enum class Stage { parsed, enumerated, selected, concretized, mutated };

std::string to_string(Stage stage);
Stage stage_from_string(std::string_view text);

struct Request {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct Response {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
  std::map<std::string, std::string> headers;
};

struct ServiceOptions {
  std::string store_dir = "scegen-sessions";
  std::uint64_t raw_cap = 1'000'000;
  params::ScenarioConfig scenario;
  llm::ProviderConfig provider;
};

class Service {
 public:
  /// `gateway` may be null; endpoints that need the LLM then answer 502.
  Service(ServiceOptions options, std::shared_ptr<const llm::Gateway> gateway);

  Response handle(const Request& request);

  const ServiceOptions& options() const { return options_; }

 private:
  Response route(const Request& request);
  Response create_session(const Request& request);
  Response get_session(const std::string& id);
  Response enumerate(const std::string& id, const Request& request);
  Response select(const std::string& id, const Request& request);
  Response mutate(const std::string& id, const Request& request);
  Response edit_params(const std::string& id, const Request& request);
  Response geometry(const std::string& id);
  Response diagram(const std::string& id, const std::string& index);
  Response file(const std::string& id, const std::string& kind, const Request& request);

  ServiceOptions options_;
  std::shared_ptr<const llm::Gateway> gateway_;
  SessionStore store_;
};

}  // namespace scegen::service
