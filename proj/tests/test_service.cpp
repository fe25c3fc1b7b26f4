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

#include "fixtures.hpp"
#include "scegen/openscenario.hpp"
#include "scegen/road.hpp"
#include "scegen/service.hpp"
#include "scegen/xml.hpp"

using namespace scegen;
using nlohmann::json;
using service::Request;
using service::Response;

namespace {

struct Client {
  std::filesystem::path dir;
  std::unique_ptr<service::Service> svc;

  explicit Client(std::filesystem::path store, bool with_gateway = true) : dir(std::move(store)) {
    service::ServiceOptions opts;
    opts.store_dir = dir.string();
    svc = std::make_unique<service::Service>(
        opts, with_gateway ? testing::mock_gateway() : nullptr);
  }

  Response call(const std::string& method, const std::string& path, const json& body = nullptr,
                std::map<std::string, std::string> query = {}) {
    return svc->handle({method, path, std::move(query), body.is_null() ? "" : body.dump()});
  }

  json ok(const std::string& method, const std::string& path, const json& body = nullptr,
          int status = 200) {
    const auto r = call(method, path, body);
    INFO(r.body);
    REQUIRE(r.status == status);
    return json::parse(r.body);
  }

  std::string session_from_case(const std::string& name) {
    for (const auto& c : testing::case_table().at("cases")) {
      if (c.at("case") == name) {
        return ok("POST", "/v1/sessions", {{"description", c.at("description")}}, 201)
            .at("session_id");
      }
    }
    FAIL("unknown case " << name);
    return {};
  }

  std::string session_from_spec(int n, std::vector<int> entries) {
    return ok("POST", "/v1/sessions", {{"spec", {{"num_entries", n}, {"entries", entries}}}}, 201)
        .at("session_id");
  }
};

int error_status(const Response& r, const std::string& code) {
  const auto body = json::parse(r.body);
  CHECK(body.at("code") == code);
  CHECK(body.contains("message"));
  return r.status;
}

std::string base(const std::string& id) { return "/v1/sessions/" + id; }

const json kFixtureSelect = {{"class_index", 0}, {"seed", 7},
                             {"lanes", {{{"left", 2}, {"right", 2}}}}, {"road_len", 50}};

}  // namespace

TEST_SUITE("service") {

TEST_CASE("health") {
  Client c(testing::scratch_dir("svc"));
  CHECK(c.ok("GET", "/v1/health").at("status") == "ok");
  CHECK(c.call("GET", "/v1/nothing").status == 404);
}

TEST_CASE("create from a description") {
  Client c(testing::scratch_dir("svc"));
  const auto id = c.session_from_case("b.6");
  CHECK(service::SessionStore::valid_id(id));
  const auto s = c.ok("GET", base(id));
  CHECK(s.at("stage") == "parsed");
  CHECK(s.at("spec").at("num_entries") == 3);
  CHECK(s.at("spec").at("cars").size() == 10);
}

TEST_CASE("create rejects empty input and flags unsupported actors") {
  Client c(testing::scratch_dir("svc"));
  CHECK(error_status(c.call("POST", "/v1/sessions", json::object()), "bad_request") == 400);
  CHECK(error_status(c.call("POST", "/v1/sessions", {{"description", "  "}}), "bad_request") == 400);
  CHECK(c.call("POST", "/v1/sessions", std::string("not json")).status == 400);
  const auto id = c.session_from_case("a.5");
  CHECK_FALSE(c.ok("GET", base(id)).at("unsupported").empty());
}

TEST_CASE("unknown descriptions and missing gateways") {
  Client c(testing::scratch_dir("svc"));
  CHECK(error_status(c.call("POST", "/v1/sessions", {{"description", "no fixture for this"}}),
                     "parse_failed") == 422);
  Client offline(testing::scratch_dir("svc"), false);
  CHECK(offline.call("POST", "/v1/sessions", {{"description", "two cars"}}).status == 502);
}

TEST_CASE("enumeration counts and idempotence") {
  Client c(testing::scratch_dir("svc"));
  const auto a = c.session_from_spec(3, {0, 1, 2});
  const auto first = c.ok("POST", base(a) + "/enumerate", {{"reduction", "pattern"}});
  CHECK(first.at("classes").size() == 4);
  CHECK(first.at("raw_count") == 8);
  CHECK(c.ok("POST", base(a) + "/enumerate", {{"reduction", "pattern"}}) == first);

  const auto b = c.session_from_spec(4, {0, 1, 2});
  CHECK(c.ok("POST", base(b) + "/enumerate", json::object()).at("classes").size() == 10);
  CHECK(c.ok("GET", base(b)).at("stage") == "enumerated");
  CHECK(c.call("GET", base(b) + "/classes/3/svg").content_type == "image/svg+xml");
  CHECK(c.call("GET", base(b) + "/classes/99/svg").status == 404);
}

TEST_CASE("capacity cap maps to 409") {
  Client c(testing::scratch_dir("svc"));
  const auto id = c.session_from_spec(6, {0, 1, 2, 3, 4, 5, 0, 1, 2});
  CHECK(error_status(c.call("POST", base(id) + "/enumerate", json::object()),
                     "capacity_exceeded") == 409);
}

TEST_CASE("selection") {
  Client c(testing::scratch_dir("svc"));
  const auto id = c.session_from_spec(4, {0, 1});
  CHECK(c.call("POST", base(id) + "/select", {{"class_index", 0}}).status == 409);
  c.ok("POST", base(id) + "/enumerate", json::object());
  CHECK(c.call("POST", base(id) + "/select", {{"class_index", 999}}).status == 404);
  CHECK(error_status(c.call("POST", base(id) + "/select",
                            {{"class_index", 0}, {"angles", {0, 5, 90, 90}}}),
                     "invalid_geometry") == 422);

  const json body = {{"class_index", 0}, {"seed", 3}, {"angles", {45, 90, 90, 90}}};
  const auto sel = c.ok("POST", base(id) + "/select", body);
  CHECK(sel.at("stage") == "concretized");
  pipeline::GeometryInput in;
  in.angles_deg = {45, 90, 90, 90};
  const auto expected = road::build_geometry(pipeline::make_roads(4, in));
  CHECK(c.ok("GET", base(id) + "/geometry") == road::geometry_json(expected));
  CHECK(c.ok("POST", base(id) + "/select", body) == sel);
}

TEST_CASE("files follow the stage machine") {
  Client c(testing::scratch_dir("svc"));
  const auto id = c.session_from_spec(4, {0, 1});
  c.ok("POST", base(id) + "/enumerate", json::object());
  CHECK(c.call("GET", base(id) + "/files/xosc").status == 409);
  CHECK(c.call("POST", base(id) + "/mutate", json::object()).status == 409);
  c.ok("POST", base(id) + "/select", {{"class_index", 1}, {"seed", 11}});

  const auto xodr = c.call("GET", base(id) + "/files/xodr");
  REQUIRE(xodr.status == 200);
  CHECK(road::validate_network(xodr.body).empty());
  CHECK(xodr.headers.at("Content-Disposition").find(id.substr(0, 8) + "_s11_original.xodr") !=
        std::string::npos);
  const auto xosc = c.call("GET", base(id) + "/files/xosc");
  CHECK(params::validate_openscenario(xosc.body).empty());
  const auto p = c.call("GET", base(id) + "/files/params");
  const auto parsed = params::params_from_json(json::parse(p.body));
  CHECK(params::to_json(parsed) == json::parse(p.body));
  CHECK(c.call("GET", base(id) + "/files/xosc", nullptr, {{"variant", "mutated"}}).status == 409);
  CHECK(c.call("GET", base(id) + "/files/pdf").status == 404);
}

TEST_CASE("heuristic mutation only moves speeds") {
  Client c(testing::scratch_dir("svc"));
  const auto id = c.session_from_spec(4, {0, 1});
  c.ok("POST", base(id) + "/enumerate", json::object());
  c.ok("POST", base(id) + "/select", {{"class_index", 1}, {"seed", 2}});
  const auto m = c.ok("POST", base(id) + "/mutate", {{"mode", "heuristic"}});
  for (const auto& f : m.at("changed_fields")) {
    CHECK(f.get<std::string>().find("init_speed") != std::string::npos);
  }
  const auto mutated = c.call("GET", base(id) + "/files/xosc", nullptr, {{"variant", "mutated"}});
  REQUIRE(mutated.status == 200);
  const auto root = xml::parse(mutated.body);
  const auto mp = params::params_from_json(m.at("params"));
  const auto speeds = root.descendants("AbsoluteTargetSpeed");
  REQUIRE(speeds.size() == mp.cars.size());
  for (std::size_t i = 0; i < speeds.size(); ++i) {
    CHECK(std::stod(speeds[i]->attr_or("value")) == doctest::Approx(mp.cars[i].init_speed));
  }
  CHECK(c.call("POST", base(id) + "/select", {{"class_index", 0}}).status == 409);
}

TEST_CASE("llm mutation through the mock") {
  Client c(testing::scratch_dir("svc"));
  const auto id = c.session_from_case("b.2");
  c.ok("POST", base(id) + "/enumerate", {{"reduction", "pattern"}});
  c.ok("POST", base(id) + "/select", kFixtureSelect);
  const auto m = c.ok("POST", base(id) + "/mutate", {{"mode", "llm"}});
  CHECK_FALSE(m.at("changed_fields").empty());
  for (const auto& f : m.at("changed_fields")) {
    CHECK(f.get<std::string>().find("init_speed") != std::string::npos);
  }
  const auto p = params::params_from_json(m.at("params"));
  for (const auto& car : p.cars) CHECK(car.init_speed <= 40.0);
}

TEST_CASE("parameter edits are validated") {
  Client c(testing::scratch_dir("svc"));
  const auto id = c.session_from_spec(4, {0, 2});
  c.ok("POST", base(id) + "/enumerate", json::object());
  c.ok("POST", base(id) + "/select", {{"class_index", 0}, {"seed", 5}});
  auto p = json::parse(c.call("GET", base(id) + "/params").body);
  p["cars"][0]["init_speed"] = 99.0;
  const auto bad = c.call("PUT", base(id) + "/params", p);
  CHECK(error_status(bad, "invalid_params") == 422);
  CHECK_FALSE(json::parse(bad.body).at("details").at("violations").empty());
  p["cars"][0]["init_speed"] = 12.5;
  c.ok("PUT", base(id) + "/params", p);
  const auto xosc = c.call("GET", base(id) + "/files/xosc").body;
  CHECK(xosc.find("12.5") != std::string::npos);
}

TEST_CASE("sessions survive a restart") {
  const auto dir = testing::scratch_dir("svc");
  std::string id;
  std::string xosc, xodr;
  {
    Client c(dir);
    id = c.session_from_spec(4, {0, 1, 3});
    c.ok("POST", base(id) + "/enumerate", json::object());
    c.ok("POST", base(id) + "/select", {{"class_index", 2}, {"seed", 9}});
    xosc = c.call("GET", base(id) + "/files/xosc").body;
    xodr = c.call("GET", base(id) + "/files/xodr").body;
  }
  Client again(dir);
  CHECK(again.call("GET", base(id) + "/files/xosc").body == xosc);
  CHECK(again.call("GET", base(id) + "/files/xodr").body == xodr);
  CHECK(again.ok("GET", base(id)).at("stage") == "concretized");
  CHECK(again.call("GET", base("0123456789abcdef0123456789abcdef")).status == 404);
  CHECK(again.call("GET", base("../../etc/passwd")).status == 404);
}

}  // TEST_SUITE
