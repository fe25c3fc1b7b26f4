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

#include <doctest.h>

#include "scegen/error.hpp"
#include "scegen/llm.hpp"

using namespace scegen;
using namespace scegen::llm;

namespace {

CompletionRequest request(std::string user = "two cars at a T junction") {
  return {"system text", std::move(user), "danger"};
}

const char* kValid = R"({"danger_targets":["init_speed"],"intensity":0.4,"summary":"fast"})";

}  // namespace

TEST_SUITE("llm") {

TEST_CASE("request keys are stable and sensitive to every field") {
  const auto k = request_key(request());
  CHECK(k.size() == 64);
  CHECK(k == request_key(request()));
  CHECK(k != request_key(request("three cars")));
  auto other = request();
  other.schema_id = "functional";
  CHECK(k != request_key(other));
  other = request();
  other.system = "different";
  CHECK(k != request_key(other));
}

TEST_CASE("mock fixture reply on the first attempt") {
  auto mock = std::make_shared<MockProvider>();
  mock->add(request(), {kValid});
  const Gateway gw(mock, builtin_schemas());
  const auto r = gw.complete_structured(request(), {});
  CHECK(r.attempts == 1);
  CHECK(r.raw == kValid);
  CHECK(r.parsed["danger_targets"][0] == "init_speed");
  CHECK(r.usage.completion_tokens > 0);
}

TEST_CASE("malformed then valid takes two attempts") {
  auto mock = std::make_shared<MockProvider>();
  mock->add(request(), {"I think the danger is speeding.", kValid});
  const Gateway gw(mock, builtin_schemas());
  const auto r = gw.complete_structured(request(), {});
  CHECK(r.attempts == 2);
  CHECK(r.parsed["intensity"] == doctest::Approx(0.4));
}

TEST_CASE("schema-invalid replies are retried too") {
  auto mock = std::make_shared<MockProvider>();
  mock->add(request(), {R"({"danger_targets":"speed"})", kValid});
  const Gateway gw(mock, builtin_schemas());
  CHECK(gw.complete_structured(request(), {}).attempts == 2);
}

TEST_CASE("exhausted retries carry every raw reply") {
  auto mock = std::make_shared<MockProvider>();
  mock->add(request(), {"a", "b", "c", "d", "e"});
  const Gateway gw(mock, builtin_schemas());
  ProviderConfig cfg;
  cfg.max_retries = 3;
  try {
    gw.complete_structured(request(), cfg);
    FAIL("expected GatewayError");
  } catch (const GatewayError& e) {
    CHECK(e.kind() == GatewayError::Kind::schema);
    CHECK(e.raw_responses() == std::vector<std::string>{"a", "b", "c", "d"});
  }
}

TEST_CASE("missing fixtures are distinguished from schema failures") {
  const Gateway gw(std::make_shared<MockProvider>(), builtin_schemas());
  try {
    gw.complete_structured(request(), {});
    FAIL("expected GatewayError");
  } catch (const GatewayError& e) {
    CHECK(e.kind() == GatewayError::Kind::fixture);
  }
}

TEST_CASE("unknown schema and bad config are domain errors") {
  const Gateway gw(std::make_shared<MockProvider>(), builtin_schemas());
  auto req = request();
  req.schema_id = "nope";
  CHECK_THROWS_AS(gw.complete_structured(req, {}), DomainError);
  ProviderConfig bad;
  bad.timeout_seconds = 0;
  CHECK_THROWS_AS(gw.complete_structured(request(), bad), DomainError);
  bad = {};
  bad.max_retries = -1;
  CHECK_THROWS_AS(gw.complete_structured(request(), bad), DomainError);
}

TEST_CASE("json extraction tolerates fences and prose") {
  CHECK(extract_json(R"({"a":1})")->at("a") == 1);
  CHECK(extract_json("```json\n{\"a\":2}\n```")->at("a") == 2);
  CHECK(extract_json("Here you go: {\"a\":3} hope it helps")->at("a") == 3);
  CHECK_FALSE(extract_json("no json here").has_value());
  CHECK_FALSE(extract_json("[1,2]").has_value());
}

TEST_CASE("http provider never runs while the network is forbidden") {
  REQUIRE(network_forbidden());
  const Gateway gw(std::make_shared<HttpProvider>(), builtin_schemas());
  try {
    gw.complete_structured(request(), {});
    FAIL("expected GatewayError");
  } catch (const GatewayError& e) {
    CHECK(e.kind() == GatewayError::Kind::transport);
  }
}

TEST_CASE("fixture files load from JSON") {
  const auto key = request_key(request());
  const auto mock = MockProvider::from_json({{"entries", {{{"key", key}, {"note", "x"}, {"responses", {nlohmann::json::parse(kValid)}}}}}});
  CHECK(mock->contains(key));
  const Gateway gw(mock, builtin_schemas());
  CHECK(gw.complete_structured(request(), {}).parsed["summary"] == "fast");
  CHECK_THROWS_AS(MockProvider::from_file("/nonexistent/fixture.json"), DomainError);
}

TEST_CASE("templates") {
  CHECK(render_template("a {{x}} b {{y}}", {{"x", "1"}, {"y", "2"}}) == "a 1 b 2");
  CHECK_THROWS_AS(render_template("{{missing}}", {}), DomainError);
  for (const char* name : {"system_v1", "functional_v1", "danger_v1", "mutate_v1"}) {
    CHECK_FALSE(prompt_template(name).empty());
  }
  CHECK_THROWS_AS(prompt_template("nope"), DomainError);
}

TEST_CASE("builtin schemas") {
  const auto reg = builtin_schemas();
  const auto* f = reg.find("functional");
  REQUIRE(f);
  CHECK_FALSE(f->check(nlohmann::json::parse(R"({"num_cars":2,"num_entries":4,"entries":[0,1],"unsupported":[]})")));
  CHECK_FALSE(f->check(nlohmann::json::parse(R"({"num_cars":null,"num_entries":null,"entries":null,"unsupported":[]})")));
  CHECK(f->check(nlohmann::json::parse(R"({"num_cars":"two"})")));
  const auto* o = reg.find("overlay");
  REQUIRE(o);
  CHECK_FALSE(o->check(nlohmann::json::parse(R"({"cars":[{"name":"car0","init_speed":3}]})")));
  CHECK(o->check(nlohmann::json::parse(R"({"cars":[{"init_speed":3}]})")));
  CHECK(o->check(nlohmann::json::parse(R"({"roads":[{"road_id":"0","angle":1}]})")));
}

}  // TEST_SUITE
