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

#include "scegen/llm.hpp"

#include <atomic>
#include <fstream>
#include <sstream>

#include "scegen/error.hpp"
#include "scegen/format.hpp"
#include "scegen/prompt_assets.hpp"

namespace scegen::llm {

namespace {
std::atomic<bool> g_network_forbidden{false};
}  // namespace

void forbid_network(bool forbidden) { g_network_forbidden = forbidden; }
bool network_forbidden() { return g_network_forbidden; }

void ProviderConfig::validate() const {
  if (!(timeout_seconds > 0.0)) throw DomainError("timeout must be positive");
  if (max_retries < 0) throw DomainError("max_retries must be >= 0");
}

std::string request_key(const CompletionRequest& request) {
  return sha256_hex(request.schema_id + "\n\x1e" + request.system + "\n\x1e" + request.user);
}

std::shared_ptr<MockProvider> MockProvider::from_json(const nlohmann::json& fixtures) {
  auto mock = std::make_shared<MockProvider>();
  for (const auto& entry : fixtures.at("entries")) {
    std::vector<std::string> responses;
    for (const auto& r : entry.at("responses")) {
      responses.push_back(r.is_string() ? r.get<std::string>() : r.dump());
    }
    mock->add(entry.at("key").get<std::string>(), std::move(responses));
  }
  return mock;
}

std::shared_ptr<MockProvider> MockProvider::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open mock fixture file " + path);
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw DomainError("bad mock fixture file " + path + ": " + e.what());
  }
}

void MockProvider::add(std::string key, std::vector<std::string> responses) {
  responses_[std::move(key)] = std::move(responses);
}

void MockProvider::add(const CompletionRequest& request, std::vector<std::string> responses) {
  add(request_key(request), std::move(responses));
}

bool MockProvider::contains(const std::string& key) const { return responses_.count(key) > 0; }

ProviderReply MockProvider::send(const std::vector<ChatMessage>& conversation,
                                 const CompletionRequest& request, const ProviderConfig&) {
  const auto key = request_key(request);
  const auto it = responses_.find(key);
  if (it == responses_.end() || it->second.empty()) {
    throw GatewayError(GatewayError::Kind::fixture,
                       "no mock fixture for request " + key + " (schema " + request.schema_id + ")");
  }
  std::size_t attempt = 0;
  for (const auto& m : conversation) {
    if (m.role == "assistant") ++attempt;
  }
  const auto& replies = it->second;
  ProviderReply reply;
  reply.text = replies[std::min(attempt, replies.size() - 1)];
  reply.usage.prompt_tokens = static_cast<int>(request.user.size() / 4);
  reply.usage.completion_tokens = static_cast<int>(reply.text.size() / 4);
  return reply;
}

void SchemaRegistry::add(Schema schema) {
  auto id = schema.id;
  schemas_.insert_or_assign(std::move(id), std::move(schema));
}

const Schema* SchemaRegistry::find(std::string_view id) const {
  const auto it = schemas_.find(id);
  return it == schemas_.end() ? nullptr : &it->second;
}

std::optional<nlohmann::json> extract_json(std::string_view text) {
  auto try_parse = [](std::string_view s) -> std::optional<nlohmann::json> {
    auto j = nlohmann::json::parse(s, nullptr, false);
    if (j.is_discarded() || !j.is_object()) return std::nullopt;
    return j;
  };
  if (auto j = try_parse(text)) return j;
  if (const auto fence = text.find("```"); fence != std::string_view::npos) {
    auto body_start = text.find('\n', fence);
    const auto close = body_start == std::string_view::npos
                           ? std::string_view::npos
                           : text.find("```", body_start);
    if (close != std::string_view::npos) {
      if (auto j = try_parse(text.substr(body_start + 1, close - body_start - 1))) return j;
    }
  }
  const auto open = text.find('{');
  const auto close = text.rfind('}');
  if (open != std::string_view::npos && close != std::string_view::npos && close > open) {
    return try_parse(text.substr(open, close - open + 1));
  }
  return std::nullopt;
}

Gateway::Gateway(std::shared_ptr<ChatProvider> provider, SchemaRegistry schemas)
    : provider_(std::move(provider)), schemas_(std::move(schemas)) {
  if (!provider_) throw DomainError("gateway needs a provider");
}

CompletionResult Gateway::complete_structured(const CompletionRequest& request,
                                              const ProviderConfig& config) const {
  config.validate();
  const auto* schema = schemas_.find(request.schema_id);
  if (!schema) throw DomainError("schema '" + request.schema_id + "' is not registered");

  std::vector<ChatMessage> conversation = {{"system", request.system}, {"user", request.user}};
  std::vector<std::string> raw_replies;
  TokenUsage usage;
  const int max_attempts = 1 + config.max_retries;
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    const auto reply = provider_->send(conversation, request, config);
    usage.prompt_tokens += reply.usage.prompt_tokens;
    usage.completion_tokens += reply.usage.completion_tokens;
    raw_replies.push_back(reply.text);

    std::string problem;
    if (auto parsed = extract_json(reply.text)) {
      if (auto err = schema->check(*parsed)) {
        problem = *err;
      } else {
        return {reply.text, std::move(*parsed), usage, attempt};
      }
    } else {
      problem = "the reply is not a JSON object";
    }
    conversation.push_back({"assistant", reply.text});
    conversation.push_back(
        {"user", "Your previous reply could not be used: " + problem +
                     ". Reply again with one JSON object only, no prose, matching: " +
                     schema->description});
  }
  throw GatewayError(GatewayError::Kind::schema,
                     "no schema-valid reply for '" + request.schema_id + "' after " +
                         std::to_string(max_attempts) + " attempt(s)",
                     std::move(raw_replies));
}

namespace {

using nlohmann::json;

std::optional<std::string> require_object(const json& v) {
  if (!v.is_object()) return "expected a JSON object";
  return std::nullopt;
}

bool is_int_or_null(const json& v) { return v.is_null() || v.is_number_integer(); }

std::optional<std::string> check_string_array(const json& v, const char* field) {
  if (!v.contains(field) || v.at(field).is_null()) return std::nullopt;
  if (!v.at(field).is_array()) return std::string(field) + " must be an array";
  for (const auto& e : v.at(field)) {
    if (!e.is_string()) return std::string(field) + " must contain strings";
  }
  return std::nullopt;
}

std::optional<std::string> check_functional(const json& v) {
  if (auto e = require_object(v)) return e;
  for (const char* f : {"num_cars", "num_entries"}) {
    if (!v.contains(f)) return std::string("missing field ") + f;
    if (!is_int_or_null(v.at(f))) return std::string(f) + " must be an integer or null";
  }
  if (v.contains("entries") && !v.at("entries").is_null()) {
    if (!v.at("entries").is_array()) return "entries must be an array of integers or null";
    for (const auto& e : v.at("entries")) {
      if (!e.is_number_integer()) return "entries must contain integers";
    }
  }
  return check_string_array(v, "unsupported");
}

std::optional<std::string> check_danger(const json& v) {
  if (auto e = require_object(v)) return e;
  if (!v.contains("danger_targets")) return "missing field danger_targets";
  if (auto e = check_string_array(v, "danger_targets")) return e;
  if (v.contains("intensity") && !v.at("intensity").is_null() && !v.at("intensity").is_number()) {
    return "intensity must be a number";
  }
  return std::nullopt;
}

std::optional<std::string> check_overlay(const json& v) {
  if (auto e = require_object(v)) return e;
  auto check_rows = [&](const char* table, const char* key,
                        bool key_is_string) -> std::optional<std::string> {
    if (!v.contains(table)) return std::nullopt;
    if (!v.at(table).is_array()) return std::string(table) + " must be an array";
    for (const auto& row : v.at(table)) {
      if (!row.is_object()) return std::string(table) + " rows must be objects";
      if (!row.contains(key)) return std::string(table) + " rows need " + key;
      if (key_is_string ? !row.at(key).is_string() : !row.at(key).is_number_integer()) {
        return std::string(table) + "." + key + " has the wrong type";
      }
      for (const auto& [field, value] : row.items()) {
        if (field == key) continue;
        if (!value.is_number() && !value.is_string()) {
          return std::string(table) + "." + field + " must be a scalar";
        }
      }
    }
    return std::nullopt;
  };
  if (auto e = check_rows("roads", "road_id", false)) return e;
  if (auto e = check_rows("cars", "name", true)) return e;
  if (auto e = check_rows("change_lanes", "car_name", true)) return e;
  if (v.contains("rationale") && !v.at("rationale").is_string()) return "rationale must be a string";
  return std::nullopt;
}

}  // namespace

SchemaRegistry builtin_schemas() {
  SchemaRegistry registry;
  registry.add({"functional",
                R"({"num_cars": integer|null, "num_entries": integer|null, )"
                R"("entries": [integer]|null, "unsupported": [string]})",
                check_functional});
  registry.add({"danger",
                R"({"danger_targets": [string], "intensity": number, "summary": string})",
                check_danger});
  registry.add({"overlay",
                R"({"roads": [{"road_id": integer, "angle": number}], )"
                R"("cars": [{"name": string, "init_speed": number}], )"
                R"("change_lanes": [{"car_name": string, "change_lane_pos": number, )"
                R"("lane_id_after_change": integer}], "rationale": string})",
                check_overlay});
  return registry;
}

std::string render_template(std::string_view text,
                            const std::map<std::string, std::string>& values) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto open = text.find("{{", pos);
    if (open == std::string_view::npos) {
      out.append(text.substr(pos));
      break;
    }
    const auto close = text.find("}}", open);
    if (close == std::string_view::npos) {
      out.append(text.substr(pos));
      break;
    }
    out.append(text.substr(pos, open - pos));
    const std::string name(text.substr(open + 2, close - open - 2));
    const auto it = values.find(name);
    if (it == values.end()) throw DomainError("template placeholder '" + name + "' has no value");
    out += it->second;
    pos = close + 2;
  }
  return out;
}

std::string_view prompt_template(std::string_view name) {
  const auto& all = assets::prompt_templates();
  const auto it = all.find(name);
  if (it == all.end()) throw DomainError("unknown prompt template '" + std::string(name) + "'");
  return it->second;
}

}  // namespace scegen::llm
