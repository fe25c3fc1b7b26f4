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

#include <cmath>

#include "scegen/error.hpp"
#include "scegen/llm.hpp"
#include "scegen/logical.hpp"
#include "scegen/mutation.hpp"
#include "scegen/params.hpp"

using namespace scegen;
using namespace scegen::mutation;
using nlohmann::json;

namespace {

struct Crossing {
  road::IntersectionGeometry geometry;
  logical::LogicalScenario scenario;
  params::ParameterSet params;
};

logical::LogicalScenario scenario_of(int n, std::vector<std::pair<int, int>> moves) {
  logical::LogicalScenario s{n, {}};
  for (std::size_t i = 0; i < moves.size(); ++i) {
    s.moves.push_back({static_cast<int>(i), moves[i].first, moves[i].second});
  }
  return s;
}

/// Two straight-through cars on a square 4-way junction: car0 0 -> 2, car1 1 -> 3.
/// Lane centres run 1.75 m right of the leg axes, so the paths meet at
/// (-1.75, 1.75): 16.75 m into car0's connector and 13.25 m into car1's.
Crossing crossing_fixture(double d0, double d1) {
  Crossing c;
  c.geometry = road::build_geometry(road::default_roads(4));
  c.scenario = scenario_of(4, {{0, 2}, {1, 2}});
  c.params = params::concretize(c.scenario, c.geometry, 1);
  const double s0 = 50.0 + 15.0 + 1.75;
  const double s1 = 50.0 + 15.0 - 1.75;
  for (auto* car : {&c.params.cars[0], &c.params.cars[1]}) {
    car->init_speed = 10.0;
    car->turning_pos = 50.0;
  }
  c.params.cars[0].init_pos = s0 - d0;
  c.params.cars[1].init_pos = s1 - d1;
  return c;
}

std::shared_ptr<llm::MockProvider> overlay_mock(const params::ParameterSet& p, const DangerFactors& f,
                                                std::vector<std::string> replies) {
  auto mock = std::make_shared<llm::MockProvider>();
  mock->add(mutation_request(p, f), std::move(replies));
  return mock;
}

}  // namespace

TEST_SUITE("mutation") {

TEST_CASE("time to conflict") {
  params::CarSpec car;
  car.init_pos = 0;
  car.init_speed = 10;
  CHECK(time_to_conflict(car, 50) == doctest::Approx(5.0));
  car.init_pos = 20;
  CHECK(time_to_conflict(car, 50) == doctest::Approx(3.0));
  car.init_speed = 0;
  CHECK(std::isinf(time_to_conflict(car, 50)));
}

TEST_CASE("target locators") {
  CHECK(target_of("cars[3].init_speed") == DangerTarget::init_speed);
  CHECK(target_of("roads[0].angle") == DangerTarget::angle);
  CHECK(target_of("change_lanes[2]") == DangerTarget::change_lane);
  CHECK(target_of("change_lanes[0].change_lane_pos") == DangerTarget::change_lane);
  CHECK_FALSE(target_of("cars[0].init_pos").has_value());
  CHECK_FALSE(target_of("roads[1].road_len").has_value());
}

TEST_CASE("crossing point matches the hand-computed lane-centre intersection") {
  const auto c = crossing_fixture(40, 60);
  REQUIRE(params::validate_params(c.params, c.geometry).empty());
  const auto report = logical::conflict_matrix(c.scenario, 4);
  REQUIRE(report.pairs.size() == 1);
  CHECK(report.pairs[0].kind == logical::ConflictKind::crossing);
  const auto point = locate_conflict(c.params, report.pairs[0], c.geometry);
  REQUIRE(point);
  CHECK(point->location.x == doctest::Approx(-1.75).epsilon(1e-3));
  CHECK(point->location.y == doctest::Approx(1.75).epsilon(1e-3));
  CHECK(point->conflict_s_a == doctest::Approx(66.75).epsilon(1e-4));
  CHECK(point->conflict_s_b == doctest::Approx(63.25).epsilon(1e-4));
}

TEST_CASE("heuristic: 40 m vs 60 m at 10 m/s raises the second car to 15 m/s") {
  const auto c = crossing_fixture(40, 60);
  const auto report = logical::conflict_matrix(c.scenario, 4);
  const auto result = heuristic_criticality(c.params, report, c.geometry);
  CHECK(result.changed_fields == std::vector<std::string>{"cars[1].init_speed"});
  CHECK(result.params.cars[0].init_speed == doctest::Approx(10.0));
  CHECK(result.params.cars[1].init_speed == doctest::Approx(15.0).epsilon(1e-3));
  const auto point = locate_conflict(result.params, report.pairs[0], c.geometry);
  REQUIRE(point);
  const double ta = time_to_conflict(result.params.cars[0], point->conflict_s_a);
  const double tb = time_to_conflict(result.params.cars[1], point->conflict_s_b);
  CHECK(std::abs(ta - tb) <= kCoArrivalTolerance);
  CHECK(params::validate_params(result.params, c.geometry).empty());
  CHECK_FALSE(result.rationale.empty());
}

TEST_CASE("heuristic strictly reduces the arrival gap") {
  for (double d1 : {20.0, 35.0, 45.0, 55.0, 62.0}) {
    const auto c = crossing_fixture(30, d1);
    const auto report = logical::conflict_matrix(c.scenario, 4);
    const auto point = *locate_conflict(c.params, report.pairs[0], c.geometry);
    const double before = std::abs(time_to_conflict(c.params.cars[0], point.conflict_s_a) -
                                   time_to_conflict(c.params.cars[1], point.conflict_s_b));
    const auto r = heuristic_criticality(c.params, report, c.geometry);
    const double after = std::abs(time_to_conflict(r.params.cars[0], point.conflict_s_a) -
                                  time_to_conflict(r.params.cars[1], point.conflict_s_b));
    CAPTURE(d1);
    if (before <= kCoArrivalTolerance) {
      CHECK(r.changed_fields.empty());
    } else {
      CHECK(after < before);
      CHECK(after <= kCoArrivalTolerance);
    }
    CHECK(params::validate_params(r.params, c.geometry).empty());
  }
}

TEST_CASE("heuristic fixed point and no-op cases") {
  const auto same = crossing_fixture(40, 40.5);
  const auto r = heuristic_criticality(same.params, logical::conflict_matrix(same.scenario, 4), same.geometry);
  CHECK(r.changed_fields.empty());
  CHECK(r.params == same.params);

  // Two cars leaving the same entry for different exits only diverge.
  const auto g = road::build_geometry(road::default_roads(4));
  const auto s = scenario_of(4, {{0, 1}, {0, 3}});
  const auto p = params::concretize(s, g, 5);
  const auto report = logical::conflict_matrix(s, 4);
  REQUIRE(report.pairs.size() == 1);
  CHECK(report.pairs[0].kind == logical::ConflictKind::diverging);
  const auto noop = heuristic_criticality(p, report, g);
  CHECK(noop.changed_fields.empty());
  CHECK(noop.params == p);
}

TEST_CASE("heuristic prefers crossing over merging") {
  const auto g = road::build_geometry(road::default_roads(4));
  // car0 0->2 crosses car1 1->3 and merges with car2 3->2.
  const auto s = scenario_of(4, {{0, 2}, {1, 2}, {3, 3}});
  const auto report = logical::conflict_matrix(s, 4);
  bool has_crossing = false, has_merging = false;
  for (const auto& pr : report.pairs) {
    has_crossing |= pr.kind == logical::ConflictKind::crossing;
    has_merging |= pr.kind == logical::ConflictKind::merging;
  }
  REQUIRE(has_crossing);
  REQUIRE(has_merging);
  auto p = params::concretize(s, g, 8);
  const auto r = heuristic_criticality(p, report, g);
  CHECK(r.rationale.find("crossing") != std::string::npos);
}

TEST_CASE("llm overlay changes only the named field") {
  const auto c = crossing_fixture(40, 60);
  DangerFactors f;
  f.description = "car0 speeds";
  const auto mock = overlay_mock(c.params, f, {R"({"cars":[{"name":"car0","init_speed":25.0}]})"});
  const llm::Gateway gw(mock, llm::builtin_schemas());
  const auto r = mutate_llm(c.params, f, gw, {}, c.geometry, 3);
  CHECK(r.changed_fields == std::vector<std::string>{"cars[0].init_speed"});
  auto expected = c.params;
  expected.cars[0].init_speed = 25.0;
  CHECK(r.params == expected);
}

TEST_CASE("llm overlay out of bounds is repaired but still reported") {
  const auto c = crossing_fixture(40, 60);
  DangerFactors f;
  const auto mock = overlay_mock(c.params, f, {R"({"cars":[{"name":"car0","init_speed":500}],"rationale":"fast"})"});
  const llm::Gateway gw(mock, llm::builtin_schemas());
  const auto r = mutate_llm(c.params, f, gw, {}, c.geometry, 3);
  CHECK(r.changed_fields == std::vector<std::string>{"cars[0].init_speed"});
  CHECK(r.params.cars[0].init_speed >= 0.0);
  CHECK(r.params.cars[0].init_speed <= 40.0);
  CHECK(params::validate_params(r.params, c.geometry).empty());
  CHECK(r.rationale == "fast");
  // Same seed, same mock: same result.
  CHECK(mutate_llm(c.params, f, gw, {}, c.geometry, 3).params == r.params);
}

TEST_CASE("llm overlay outside the targets is a contract error") {
  const auto c = crossing_fixture(40, 60);
  DangerFactors f;
  f.targets = {DangerTarget::angle};
  const auto mock = overlay_mock(c.params, f, {R"({"cars":[{"name":"car0","init_speed":12}]})"});
  const llm::Gateway gw(mock, llm::builtin_schemas());
  CHECK_THROWS_AS(mutate_llm(c.params, f, gw, {}, c.geometry, 3), ContractError);

  DangerFactors all;
  const auto mock2 = overlay_mock(c.params, all, {R"({"cars":[{"name":"car0","init_pos":3}]})"});
  const llm::Gateway gw2(mock2, llm::builtin_schemas());
  CHECK_THROWS_AS(mutate_llm(c.params, all, gw2, {}, c.geometry, 3), ContractError);
}

TEST_CASE("unparseable overlays end in a mutator error carrying the raw reply") {
  const auto c = crossing_fixture(40, 60);
  DangerFactors f;
  const auto mock = overlay_mock(c.params, f, {"not json", "still not json"});
  const llm::Gateway gw(mock, llm::builtin_schemas());
  llm::ProviderConfig cfg;
  cfg.max_retries = 2;
  try {
    mutate_llm(c.params, f, gw, cfg, c.geometry, 3);
    FAIL("expected MutatorError");
  } catch (const MutatorError& e) {
    CHECK(e.raw() == "still not json");
  }
}

TEST_CASE("llm mutation refuses dirty input") {
  auto c = crossing_fixture(40, 60);
  c.params.cars[0].init_speed = -1;
  DangerFactors f;
  const llm::Gateway gw(std::make_shared<llm::MockProvider>(), llm::builtin_schemas());
  CHECK_THROWS_AS(mutate_llm(c.params, f, gw, {}, c.geometry, 3), ContractError);
}

TEST_CASE("change-lane overlays add rows") {
  auto g = road::build_geometry(road::default_roads(4, 50.0, 2, 2));
  const auto s = scenario_of(4, {{0, 2}, {1, 2}});
  const auto p = params::concretize(s, g, 4);
  DangerFactors f;
  f.targets = {DangerTarget::change_lane};
  const auto mock = overlay_mock(p, f, {R"({"change_lanes":[{"car_name":"car1","change_lane_pos":2,"lane_id_after_change":-2}]})"});
  const llm::Gateway gw(mock, llm::builtin_schemas());
  const auto r = mutate_llm(p, f, gw, {}, g, 3);
  CHECK(r.changed_fields == std::vector<std::string>{"change_lanes[0]"});
  REQUIRE(r.params.change_lanes.size() == 1);
  CHECK(r.params.change_lanes[0].lane_id_after_change == -2);
}

TEST_CASE("danger factors JSON") {
  DangerFactors f;
  f.targets = {DangerTarget::angle, DangerTarget::change_lane};
  f.intensity = 0.25;
  const auto back = danger_factors_from_json(to_json(f));
  CHECK(back.targets == f.targets);
  CHECK(back.intensity == doctest::Approx(0.25));
  CHECK_THROWS_AS(danger_factors_from_json(json{{"targets", json::array()}}), DomainError);
  CHECK_THROWS_AS(danger_factors_from_json(json{{"targets", {"pedestrian"}}}), DomainError);
}

}  // TEST_SUITE
