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

#include "scegen/params.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "scegen/error.hpp"

namespace scegen::params {

const RoadSpec* ParameterSet::road(int road_id) const {
  for (const auto& r : roads) {
    if (r.road_id == road_id) return &r;
  }
  return nullptr;
}

const CarSpec* ParameterSet::car(std::string_view name) const {
  const auto idx = car_index(name);
  return idx < 0 ? nullptr : &cars[static_cast<std::size_t>(idx)];
}

std::ptrdiff_t ParameterSet::car_index(std::string_view name) const {
  for (std::size_t i = 0; i < cars.size(); ++i) {
    if (cars[i].name == name) return static_cast<std::ptrdiff_t>(i);
  }
  return -1;
}

ParameterSet concretize(const logical::LogicalScenario& scenario,
                        const road::IntersectionGeometry& geometry, std::uint64_t seed,
                        const ScenarioConfig& config) {
  if (static_cast<std::size_t>(scenario.num_entries) != geometry.legs.size()) {
    throw ContractError("scenario has " + std::to_string(scenario.num_entries) +
                        " entries but the geometry has " + std::to_string(geometry.legs.size()) +
                        " legs");
  }
  Rng rng(seed);
  ParameterSet params;
  params.seed = seed;
  params.roads = geometry.roads();

  const auto exits = scenario.exits();
  for (std::size_t i = 0; i < scenario.moves.size(); ++i) {
    const auto& move = scenario.moves[i];
    const auto& in = geometry.legs[static_cast<std::size_t>(move.entry)].spec;
    const auto& out = geometry.legs[static_cast<std::size_t>(exits[i])].spec;
    if (in.right_num < 1) {
      throw ContractError("road " + std::to_string(in.road_id) + " has no lane toward the junction");
    }
    if (out.left_num < 1) {
      throw ContractError("road " + std::to_string(out.road_id) + " has no lane leaving the junction");
    }
    CarSpec car;
    car.name = "car" + std::to_string(move.car_id);
    car.type = vehicle_types()[static_cast<std::size_t>(
        rng.pick(0, static_cast<int>(vehicle_types().size()) - 1))];
    car.init_road_id = in.road_id;
    car.init_lane_id = -rng.pick(1, in.right_num);
    car.init_pos = rng.uniform(0.0, 0.5 * in.road_len);
    car.turning_pos = rng.uniform(std::max(car.init_pos, 0.8 * in.road_len), in.road_len);
    car.init_speed = rng.uniform(config.sample_speed_min, config.sample_speed_max);
    car.final_road_id = out.road_id;
    const auto* conn = geometry.find_connection(in.road_id, car.init_lane_id, out.road_id);
    car.final_lane_id = conn ? conn->outgoing_lane_id : 1;
    car.final_pos = rng.uniform(0.0, 0.3 * out.road_len);
    params.cars.push_back(std::move(car));
  }
  return params;
}

std::pair<double, double> angle_bounds(std::span<const RoadSpec> roads, std::size_t index,
                                       double min_separation) {
  if (index == 0) return {0.0, kTwoPi};
  double others = 0.0;
  for (std::size_t j = 1; j < roads.size(); ++j) {
    if (j != index) others += roads[j].angle;
  }
  return {min_separation, kTwoPi - min_separation - others};
}

namespace {

std::string interval(double lo, double hi) {
  return "[" + format_number(lo) + ", " + format_number(hi) + "]";
}

std::string interval(int lo, int hi) {
  return "[" + std::to_string(lo) + ", " + std::to_string(hi) + "]";
}

bool in_range(double v, double lo, double hi) { return std::isfinite(v) && v >= lo && v <= hi; }

std::string car_path(std::size_t i, const char* field) {
  return "cars[" + std::to_string(i) + "]." + field;
}

}  // namespace

std::vector<Violation> validate_params(const ParameterSet& params,
                                       const road::IntersectionGeometry& geometry,
                                       const ScenarioConfig& config) {
  std::vector<Violation> out;
  auto add = [&](std::string path, std::string rule, std::string observed, std::string bounds,
                 bool repairable = true) {
    out.push_back({std::move(path), std::move(rule), std::move(observed), std::move(bounds),
                   repairable});
  };

  std::set<int> road_ids;
  for (std::size_t i = 0; i < params.roads.size(); ++i) {
    const auto& r = params.roads[i];
    const std::string path = "roads[" + std::to_string(i) + "]";
    if (!road_ids.insert(r.road_id).second) {
      add(path + ".road_id", "road-id-unique", std::to_string(r.road_id), "unique", false);
      continue;
    }
    const auto* leg = geometry.leg_by_road(r.road_id);
    if (!leg) {
      add(path + ".road_id", "road-exists", std::to_string(r.road_id), "road of the geometry",
          false);
      continue;
    }
    if (!(r.road_len > 0.0) || r.road_len != leg->spec.road_len) {
      add(path + ".road_len", "road-geometry-mismatch", format_number(r.road_len),
          format_number(leg->spec.road_len), false);
    }
    if (r.left_num != leg->spec.left_num) {
      add(path + ".left_num", "road-geometry-mismatch", std::to_string(r.left_num),
          std::to_string(leg->spec.left_num), false);
    }
    if (r.right_num != leg->spec.right_num) {
      add(path + ".right_num", "road-geometry-mismatch", std::to_string(r.right_num),
          std::to_string(leg->spec.right_num), false);
    }
    const auto [lo, hi] = angle_bounds(params.roads, i, config.min_separation);
    const bool ok = i == 0 ? (std::isfinite(r.angle) && r.angle >= lo && r.angle < hi)
                           : in_range(r.angle, lo, hi);
    if (!ok) add(path + ".angle", "angle-separation", format_number(r.angle), interval(lo, hi));
  }
  if (params.roads.size() != geometry.legs.size()) {
    add("roads", "road-geometry-mismatch", std::to_string(params.roads.size()),
        std::to_string(geometry.legs.size()), false);
  }

  std::set<std::string> names;
  std::set<std::string> unsettled;  // cars whose init/turning position is invalid
  for (std::size_t i = 0; i < params.cars.size(); ++i) {
    const auto& c = params.cars[i];
    if (c.name.empty() || !names.insert(c.name).second) {
      add(car_path(i, "name"), "car-name-unique", c.name, "unique non-empty", false);
    }
    const auto& types = vehicle_types();
    if (std::find(types.begin(), types.end(), c.type) == types.end()) {
      add(car_path(i, "type"), "type-catalog", c.type, "{car, truck, motorcycle}");
    }
    const auto* in = params.road(c.init_road_id);
    const auto* fin = params.road(c.final_road_id);
    if (!in) {
      add(car_path(i, "init_road_id"), "road-exists", std::to_string(c.init_road_id),
          "existing road id", false);
    }
    if (!fin) {
      add(car_path(i, "final_road_id"), "road-exists", std::to_string(c.final_road_id),
          "existing road id", false);
    }
    if (in && fin && c.init_road_id == c.final_road_id) {
      add(car_path(i, "final_road_id"), "route-distinct", std::to_string(c.final_road_id),
          "road other than " + std::to_string(c.init_road_id), false);
    }
    if (!in_range(c.init_speed, config.v_min, config.v_max)) {
      add(car_path(i, "init_speed"), "speed-range", format_number(c.init_speed),
          interval(config.v_min, config.v_max));
    }
    if (in) {
      if (c.init_lane_id < -in->right_num || c.init_lane_id > -1) {
        add(car_path(i, "init_lane_id"), "lane-exists", std::to_string(c.init_lane_id),
            interval(-in->right_num, -1), in->right_num > 0);
      }
      const bool init_ok = in_range(c.init_pos, 0.0, in->road_len);
      if (!init_ok) {
        add(car_path(i, "init_pos"), "init-pos-range", format_number(c.init_pos),
            interval(0.0, in->road_len));
      }
      const double turn_lo = init_ok ? c.init_pos : 0.0;
      const bool turn_ok = in_range(c.turning_pos, turn_lo, in->road_len);
      if (!turn_ok) {
        add(car_path(i, "turning_pos"), "turning-pos-range", format_number(c.turning_pos),
            interval(turn_lo, in->road_len));
      }
      if (!init_ok || !turn_ok) unsettled.insert(c.name);
    }
    if (fin) {
      if (c.final_lane_id < 1 || c.final_lane_id > fin->left_num) {
        add(car_path(i, "final_lane_id"), "lane-exists", std::to_string(c.final_lane_id),
            interval(1, fin->left_num), fin->left_num > 0);
      }
      if (!in_range(c.final_pos, 0.0, fin->road_len)) {
        add(car_path(i, "final_pos"), "final-pos-range", format_number(c.final_pos),
            interval(0.0, fin->road_len));
      }
    }
  }

  for (std::size_t i = 0; i < params.change_lanes.size(); ++i) {
    const auto& cl = params.change_lanes[i];
    const std::string path = "change_lanes[" + std::to_string(i) + "]";
    const auto* car = params.car(cl.car_name);
    if (!car) {
      add(path + ".car_name", "car-exists", cl.car_name, "name of an existing car", false);
      continue;
    }
    const auto* in = params.road(car->init_road_id);
    if (!in) continue;  // already reported on the car
    if (unsettled.count(car->name)) {
      add(path + ".change_lane_pos", "change-lane-pos-range", format_number(cl.change_lane_pos),
          "depends on invalid position of " + car->name);
    } else {
      const double hi = car->turning_pos - car->init_pos;
      if (!in_range(cl.change_lane_pos, 0.0, hi)) {
        add(path + ".change_lane_pos", "change-lane-pos-range", format_number(cl.change_lane_pos),
            interval(0.0, hi));
      }
    }
    if (cl.lane_id_after_change < -in->right_num || cl.lane_id_after_change > -1) {
      add(path + ".lane_id_after_change", "lane-exists", std::to_string(cl.lane_id_after_change),
          interval(-in->right_num, -1), in->right_num > 0);
    }
  }
  return out;
}

namespace {

struct FieldRef {
  std::string table;
  std::size_t index = 0;
  std::string field;
};

FieldRef parse_path(const std::string& path) {
  const auto open = path.find('[');
  const auto close = path.find(']');
  const auto dot = path.find('.', close == std::string::npos ? 0 : close);
  if (open == std::string::npos || close == std::string::npos || dot == std::string::npos ||
      close < open) {
    throw RepairError("cannot repair field '" + path + "'", {path});
  }
  FieldRef ref;
  ref.table = path.substr(0, open);
  ref.index = std::stoul(path.substr(open + 1, close - open - 1));
  ref.field = path.substr(dot + 1);
  return ref;
}

}  // namespace

ParameterSet repair_params(const ParameterSet& params, std::span<const Violation> violations,
                           std::uint64_t seed, const ScenarioConfig& config) {
  std::vector<std::string> structural;
  for (const auto& v : violations) {
    if (!v.repairable) structural.push_back(v.path);
  }
  if (!structural.empty()) {
    std::string msg = "structural violations cannot be repaired:";
    for (const auto& f : structural) msg += " " + f;
    throw RepairError(msg, structural);
  }

  std::set<std::size_t> bad_angles;
  std::map<std::size_t, std::set<std::string>> bad_cars;
  std::map<std::size_t, std::set<std::string>> bad_changes;
  for (const auto& v : violations) {
    const auto ref = parse_path(v.path);
    if (ref.table == "roads" && ref.field == "angle" && ref.index < params.roads.size()) {
      bad_angles.insert(ref.index);
    } else if (ref.table == "cars" && ref.index < params.cars.size()) {
      bad_cars[ref.index].insert(ref.field);
    } else if (ref.table == "change_lanes" && ref.index < params.change_lanes.size()) {
      bad_changes[ref.index].insert(ref.field);
    } else {
      throw RepairError("cannot repair field '" + v.path + "'", {v.path});
    }
  }

  ParameterSet out = params;
  Rng rng(seed ^ 0x9E3779B97F4A7C15ULL);

  // Angles share one budget; start violated ones at the minimum so each
  // resample sees the widest feasible interval.
  for (std::size_t i : bad_angles) {
    if (i > 0) out.roads[i].angle = config.min_separation;
  }
  for (std::size_t i : bad_angles) {
    const auto [lo, hi] = angle_bounds(out.roads, i, config.min_separation);
    if (hi < lo) {
      throw RepairError("no feasible angle for roads[" + std::to_string(i) + "]",
                        {"roads[" + std::to_string(i) + "].angle"});
    }
    double v = rng.uniform(lo, hi);
    if (i == 0 && v >= kTwoPi) v = 0.0;
    out.roads[i].angle = v;
  }

  for (const auto& [i, fields] : bad_cars) {
    auto& c = out.cars[i];
    const auto* in = out.road(c.init_road_id);
    const auto* fin = out.road(c.final_road_id);
    auto has = [&](const char* f) { return fields.count(f) > 0; };
    if (has("type")) {
      c.type = vehicle_types()[static_cast<std::size_t>(
          rng.pick(0, static_cast<int>(vehicle_types().size()) - 1))];
    }
    if (has("init_lane_id") && in) c.init_lane_id = -rng.pick(1, in->right_num);
    if (has("final_lane_id") && fin) c.final_lane_id = rng.pick(1, fin->left_num);
    if (has("init_pos") && in) {
      const double hi = has("turning_pos") ? in->road_len : c.turning_pos;
      c.init_pos = rng.uniform(0.0, hi);
    }
    if (has("turning_pos") && in) c.turning_pos = rng.uniform(c.init_pos, in->road_len);
    if (has("final_pos") && fin) c.final_pos = rng.uniform(0.0, fin->road_len);
    if (has("init_speed")) c.init_speed = rng.uniform(config.v_min, config.v_max);
  }

  for (const auto& [i, fields] : bad_changes) {
    auto& cl = out.change_lanes[i];
    const auto* car = out.car(cl.car_name);
    if (!car) continue;
    const auto* in = out.road(car->init_road_id);
    if (fields.count("change_lane_pos")) {
      cl.change_lane_pos = rng.uniform(0.0, std::max(0.0, car->turning_pos - car->init_pos));
    }
    if (fields.count("lane_id_after_change") && in) {
      cl.lane_id_after_change = -rng.pick(1, in->right_num);
    }
  }
  return out;
}

nlohmann::json to_json(const CarSpec& c) {
  return {{"name", c.name},
          {"type", c.type},
          {"init_pos", c.init_pos},
          {"init_speed", c.init_speed},
          {"init_road_id", c.init_road_id},
          {"init_lane_id", c.init_lane_id},
          {"turning_pos", c.turning_pos},
          {"final_pos", c.final_pos},
          {"final_road_id", c.final_road_id},
          {"final_lane_id", c.final_lane_id}};
}

nlohmann::json to_json(const ChangeLaneSpec& cl) {
  return {{"car_name", cl.car_name},
          {"change_lane_pos", cl.change_lane_pos},
          {"lane_id_after_change", cl.lane_id_after_change}};
}

nlohmann::json to_json(const ParameterSet& p) {
  auto roads = nlohmann::json::array();
  for (const auto& r : p.roads) roads.push_back(road::to_json(r));
  auto cars = nlohmann::json::array();
  for (const auto& c : p.cars) cars.push_back(to_json(c));
  auto changes = nlohmann::json::array();
  for (const auto& cl : p.change_lanes) changes.push_back(to_json(cl));
  return {{"roads", roads}, {"cars", cars}, {"change_lanes", changes}, {"seed", p.seed}};
}

ParameterSet params_from_json(const nlohmann::json& j) {
  ParameterSet p;
  for (const auto& r : j.at("roads")) p.roads.push_back(road::road_from_json(r));
  for (const auto& c : j.at("cars")) {
    CarSpec car;
    car.name = c.at("name").get<std::string>();
    car.type = c.at("type").get<std::string>();
    car.init_pos = c.at("init_pos").get<double>();
    car.init_speed = c.at("init_speed").get<double>();
    car.init_road_id = c.at("init_road_id").get<int>();
    car.init_lane_id = c.at("init_lane_id").get<int>();
    car.turning_pos = c.at("turning_pos").get<double>();
    car.final_pos = c.at("final_pos").get<double>();
    car.final_road_id = c.at("final_road_id").get<int>();
    car.final_lane_id = c.at("final_lane_id").get<int>();
    p.cars.push_back(std::move(car));
  }
  if (j.contains("change_lanes")) {
    for (const auto& cl : j.at("change_lanes")) {
      p.change_lanes.push_back({cl.at("car_name").get<std::string>(),
                                cl.at("change_lane_pos").get<double>(),
                                cl.at("lane_id_after_change").get<int>()});
    }
  }
  p.seed = j.value("seed", std::uint64_t{0});
  return p;
}

}  // namespace scegen::params
