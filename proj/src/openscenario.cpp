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

#include "scegen/openscenario.hpp"

#include <set>

#include "scegen/error.hpp"
#include "scegen/xml.hpp"

namespace scegen::params {

namespace {

struct VehicleShape {
  const char* category;
  double length, width, height;
  double max_speed;
};

VehicleShape shape_for(const std::string& type) {
  if (type == "truck") return {"truck", 8.0, 2.5, 3.2, 30.0};
  if (type == "motorcycle") return {"motorbike", 2.2, 0.8, 1.5, 50.0};
  return {"car", 4.5, 1.8, 1.5, 50.0};
}

xml::Element lane_position(int road_id, int lane_id, double s) {
  xml::Element pos("Position");
  pos.child("LanePosition")
      .attr("roadId", std::to_string(road_id))
      .attr("laneId", std::to_string(lane_id))
      .attr("offset", "0")
      .attr("s", s);
  return pos;
}

xml::Element vehicle(const CarSpec& car) {
  const auto shape = shape_for(car.type);
  xml::Element v("Vehicle");
  v.attr("name", car.type).attr("vehicleCategory", shape.category);
  v.child("ParameterDeclarations");
  auto& box = v.child("BoundingBox");
  box.child("Center").attr("x", shape.length * 0.3).attr("y", "0").attr("z", shape.height * 0.5);
  box.child("Dimensions")
      .attr("width", shape.width)
      .attr("length", shape.length)
      .attr("height", shape.height);
  v.child("Performance")
      .attr("maxSpeed", shape.max_speed)
      .attr("maxAcceleration", "5")
      .attr("maxDeceleration", "10");
  auto& axles = v.child("Axles");
  axles.child("FrontAxle")
      .attr("maxSteering", "0.5")
      .attr("wheelDiameter", "0.6")
      .attr("trackWidth", shape.width * 0.9)
      .attr("positionX", shape.length * 0.6)
      .attr("positionZ", "0.3");
  axles.child("RearAxle")
      .attr("maxSteering", "0")
      .attr("wheelDiameter", "0.6")
      .attr("trackWidth", shape.width * 0.9)
      .attr("positionX", "0")
      .attr("positionZ", "0.3");
  v.child("Properties");
  return v;
}

xml::Element traveled_distance_trigger(const std::string& name, const std::string& entity,
                                       double distance) {
  xml::Element trigger("StartTrigger");
  auto& cond = trigger.child("ConditionGroup").child("Condition");
  cond.attr("name", name).attr("delay", "0").attr("conditionEdge", "rising");
  auto& by_entity = cond.child("ByEntityCondition");
  by_entity.child("TriggeringEntities")
      .attr("triggeringEntitiesRule", "any")
      .child("EntityRef")
      .attr("entityRef", entity);
  by_entity.child("EntityCondition").child("TraveledDistanceCondition").attr("value", distance);
  return trigger;
}

xml::Element event(const std::string& name, xml::Element action, xml::Element trigger) {
  xml::Element ev("Event");
  ev.attr("name", name).attr("priority", "overwrite").attr("maximumExecutionCount", "1");
  ev.add(std::move(action));
  ev.add(std::move(trigger));
  return ev;
}

}  // namespace

ScenarioDocument emit_openscenario(const ParameterSet& params,
                                   const road::IntersectionGeometry& geometry,
                                   std::string_view xodr_path, const ScenarioConfig& config) {
  const auto violations = validate_params(params, geometry, config);
  if (!violations.empty()) {
    throw ContractError("parameter set has " + std::to_string(violations.size()) +
                        " violation(s), first: " + violations.front().path + " (" +
                        violations.front().rule + "); repair before emitting");
  }

  xml::Element root("OpenSCENARIO");
  root.child("FileHeader")
      .attr("revMajor", "1")
      .attr("revMinor", "1")
      .attr("date", "2024-01-01T00:00:00")
      .attr("description", "scegen intersection scenario seed " + std::to_string(params.seed))
      .attr("author", "scegen");
  root.child("ParameterDeclarations");
  root.child("CatalogLocations");
  auto& network = root.child("RoadNetwork");
  network.child("LogicFile").attr("filepath", std::string(xodr_path));
  network.child("SceneGraphFile").attr("filepath", "");

  auto& entities = root.child("Entities");
  for (const auto& car : params.cars) {
    auto& obj = entities.child("ScenarioObject");
    obj.attr("name", car.name);
    obj.add(vehicle(car));
  }

  auto& storyboard = root.child("Storyboard");
  auto& init_actions = storyboard.child("Init").child("Actions");
  for (const auto& car : params.cars) {
    auto& priv = init_actions.child("Private");
    priv.attr("entityRef", car.name);
    priv.child("PrivateAction").child("TeleportAction").add(
        lane_position(car.init_road_id, car.init_lane_id, car.init_pos));
    auto& speed = priv.child("PrivateAction").child("LongitudinalAction").child("SpeedAction");
    speed.child("SpeedActionDynamics")
        .attr("dynamicsShape", "step")
        .attr("value", "0")
        .attr("dynamicsDimension", "time");
    speed.child("SpeedActionTarget").child("AbsoluteTargetSpeed").attr("value", car.init_speed);
  }

  auto& story = storyboard.child("Story");
  story.attr("name", "intersection_story");
  auto& act = story.child("Act");
  act.attr("name", "intersection_act");

  for (const auto& car : params.cars) {
    const auto* out = params.road(car.final_road_id);
    int lane_at_turn = car.init_lane_id;
    std::vector<const ChangeLaneSpec*> changes;
    for (const auto& cl : params.change_lanes) {
      if (cl.car_name == car.name) changes.push_back(&cl);
    }
    if (!changes.empty()) lane_at_turn = changes.back()->lane_id_after_change;
    const auto* conn = geometry.find_connection(car.init_road_id, lane_at_turn, car.final_road_id);
    if (!conn) {
      throw ContractError("no connecting road from road " + std::to_string(car.init_road_id) +
                          " lane " + std::to_string(lane_at_turn) + " to road " +
                          std::to_string(car.final_road_id));
    }

    auto& group = act.child("ManeuverGroup");
    group.attr("maximumExecutionCount", "1").attr("name", car.name + "_group");
    group.child("Actors")
        .attr("selectTriggeringEntities", "false")
        .child("EntityRef")
        .attr("entityRef", car.name);
    auto& maneuver = group.child("Maneuver");
    maneuver.attr("name", car.name + "_maneuver");

    int change_index = 0;
    for (const auto* cl : changes) {
      xml::Element action("Action");
      const std::string base = car.name + "_lane_change_" + std::to_string(change_index++);
      action.attr("name", base);
      auto& lc = action.child("PrivateAction").child("LateralAction").child("LaneChangeAction");
      lc.child("LaneChangeActionDynamics")
          .attr("dynamicsShape", "sinusoidal")
          .attr("value", "3")
          .attr("dynamicsDimension", "time");
      lc.child("LaneChangeTarget")
          .child("AbsoluteTargetLane")
          .attr("value", std::to_string(cl->lane_id_after_change));
      maneuver.add(event(base + "_event", std::move(action),
                         traveled_distance_trigger(base + "_trigger", car.name,
                                                   cl->change_lane_pos)));
    }

    xml::Element action("Action");
    action.attr("name", car.name + "_turn");
    auto& follow = action.child("PrivateAction").child("RoutingAction").child(
        "FollowTrajectoryAction");
    auto& traj = follow.child("TrajectoryRef").child("Trajectory");
    traj.attr("name", car.name + "_trajectory").attr("closed", "false");
    auto& polyline = traj.child("Shape").child("Polyline");
    polyline.child("Vertex").add(lane_position(car.init_road_id, lane_at_turn, car.turning_pos));
    constexpr int kSteps = 4;
    for (int k = 0; k <= kSteps; ++k) {
      polyline.child("Vertex").add(
          lane_position(conn->id, -1, conn->path.length * k / kSteps));
    }
    polyline.child("Vertex").add(
        lane_position(car.final_road_id, car.final_lane_id, out->road_len - car.final_pos));
    follow.child("TimeReference").child("None");
    follow.child("TrajectoryFollowingMode").attr("followingMode", "position");
    maneuver.add(event(car.name + "_turn_event", std::move(action),
                       traveled_distance_trigger(car.name + "_turn_trigger", car.name,
                                                 car.turning_pos - car.init_pos)));
  }

  auto& act_start = act.child("StartTrigger").child("ConditionGroup").child("Condition");
  act_start.attr("name", "act_start").attr("delay", "0").attr("conditionEdge", "none");
  act_start.child("ByValueCondition")
      .child("SimulationTimeCondition")
      .attr("value", "0")
      .attr("rule", "greaterThan");

  auto& stop = storyboard.child("StopTrigger").child("ConditionGroup").child("Condition");
  stop.attr("name", "stop_time").attr("delay", "0").attr("conditionEdge", "rising");
  stop.child("ByValueCondition")
      .child("SimulationTimeCondition")
      .attr("value", "30")
      .attr("rule", "greaterThan");

  ScenarioDocument doc{DocumentKind::openscenario, xml::to_string(root), {}};
  doc.report = validate_openscenario(doc.text);
  return doc;
}

std::vector<Violation> validate_openscenario(std::string_view xml_text) {
  const auto root = xml::parse(xml_text);
  std::vector<Violation> out;
  if (root.name != "OpenSCENARIO") {
    out.push_back({"/", "root-element", root.name, "OpenSCENARIO", false});
    return out;
  }
  const auto* network = root.first("RoadNetwork");
  const auto* logic = network ? network->first("LogicFile") : nullptr;
  if (!logic || logic->attr_or("filepath").empty()) {
    out.push_back({"RoadNetwork.LogicFile", "logic-file-missing", "", "non-empty filepath", false});
  }
  std::set<std::string> names;
  for (const auto* obj : root.descendants("ScenarioObject")) {
    const auto name = obj->attr_or("name");
    if (!names.insert(name).second) {
      out.push_back({"Entities.ScenarioObject[" + name + "]", "duplicate-id", name, "unique",
                     false});
    }
  }
  std::vector<const xml::Node*> refs;
  root.collect("EntityRef", refs);
  root.collect("Private", refs);
  for (const auto* ref : refs) {
    const auto name = ref->attr_or("entityRef");
    if (!names.count(name)) {
      out.push_back({ref->name + "[entityRef=" + name + "]", "dangling-reference", name,
                     "ScenarioObject name", false});
    }
  }
  return out;
}

}  // namespace scegen::params
