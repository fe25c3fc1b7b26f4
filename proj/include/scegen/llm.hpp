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

// Chat-completion gateway with schema-checked structured output.
//
// A ChatProvider turns a conversation into a reply; the Gateway extracts JSON
// from each reply, checks it against a registered schema and retries with a
// corrective message until it validates or the retry budget is spent.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace scegen::llm {

struct ProviderConfig {
  /// OpenAI-compatible API root; requests go to `<base_url>/chat/completions`.
  std::string base_url = "https://api.deepseek.com/v1";
  std::string model_name = "deepseek-chat";
  /// Name of the environment variable holding the API key.
  std::string api_key_env = "SCEGEN_LLM_API_KEY";
  double timeout_seconds = 60.0;
  int max_retries = 3;
  double temperature = 0.0;

  void validate() const;
};

struct ChatMessage {
  std::string role;
  std::string content;
};

struct CompletionRequest {
  std::string system;
  std::string user;
  std::string schema_id;
};

struct TokenUsage {
  int prompt_tokens = 0;
  int completion_tokens = 0;
};

struct CompletionResult {
  std::string raw;
  nlohmann::json parsed;
  TokenUsage usage;
  int attempts = 0;
};

struct ProviderReply {
  std::string text;
  TokenUsage usage;
};

class ChatProvider {
 public:
  virtual ~ChatProvider() = default;
  /// Throws GatewayError{transport|auth|fixture} on failure.
  virtual ProviderReply send(const std::vector<ChatMessage>& conversation,
                             const CompletionRequest& request, const ProviderConfig& config) = 0;
};

/// Stable fixture key of a request: SHA-256 over schema id, system and user text.
std::string request_key(const CompletionRequest& request);

/// Replays canned replies keyed by request_key. The n-th attempt of a request
/// receives the n-th reply of its entry (the last one repeats). Never touches
/// the network.
class MockProvider : public ChatProvider {
 public:
  MockProvider() = default;

  /// Fixture format: {"entries":[{"key": "...", "note": "...", "responses": ["..."]}]}
  static std::shared_ptr<MockProvider> from_file(const std::string& path);
  static std::shared_ptr<MockProvider> from_json(const nlohmann::json& fixtures);

  void add(std::string key, std::vector<std::string> responses);
  void add(const CompletionRequest& request, std::vector<std::string> responses);
  bool contains(const std::string& key) const;
  std::size_t size() const { return responses_.size(); }

  ProviderReply send(const std::vector<ChatMessage>& conversation,
                     const CompletionRequest& request, const ProviderConfig& config) override;

 private:
  std::map<std::string, std::vector<std::string>> responses_;
};

/// OpenAI-compatible chat-completions over HTTP(S).
class HttpProvider : public ChatProvider {
 public:
  ProviderReply send(const std::vector<ChatMessage>& conversation,
                     const CompletionRequest& request, const ProviderConfig& config) override;
};

/// Returns an error message when `value` does not conform, nullopt when it does.
using SchemaCheck = std::function<std::optional<std::string>(const nlohmann::json& value)>;

struct Schema {
  std::string id;
  /// Shape description appended to prompts and corrective retries.
  std::string description;
  SchemaCheck check;
};

class SchemaRegistry {
 public:
  void add(Schema schema);
  const Schema* find(std::string_view id) const;

 private:
  std::map<std::string, Schema, std::less<>> schemas_;
};

/// Pulls the first JSON object out of a reply, tolerating ``` fences and prose.
std::optional<nlohmann::json> extract_json(std::string_view text);

class Gateway {
 public:
  Gateway(std::shared_ptr<ChatProvider> provider, SchemaRegistry schemas);

  /// First reply that parses and passes its schema. Retries up to
  /// config.max_retries times with a corrective suffix; throws GatewayError
  /// (kind schema) carrying every raw reply once retries run out. Transport
  /// and auth failures propagate immediately.
  CompletionResult complete_structured(const CompletionRequest& request,
                                       const ProviderConfig& config) const;

  const SchemaRegistry& schemas() const { return schemas_; }

 private:
  std::shared_ptr<ChatProvider> provider_;
  SchemaRegistry schemas_;
};

/// Registry with the schemas used by stage-1 parsing and mutation.
SchemaRegistry builtin_schemas();

/// Fills {{name}} placeholders.
std::string render_template(std::string_view text,
                            const std::map<std::string, std::string>& values);

/// Text of a bundled prompt template (assets/prompts/<name>.txt).
std::string_view prompt_template(std::string_view name);

/// Set to forbid any HttpProvider traffic in this process (used by tests).
void forbid_network(bool forbidden);
bool network_forbidden();

}  // namespace scegen::llm
