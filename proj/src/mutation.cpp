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

#include "scegen/mutation.hpp"

#include <algorithm>
#include <cmath>

#include "scegen/error.hpp"

namespace scegen::mutation {

using nlohmann::json;
using params::ParameterSet;

std::string to_string(DangerTarget target) {
  switch (target) {
    case DangerTarget::angle: return "angle";
    case DangerTarget::init_speed: return "init_speed";
    case DangerTarget::change_lane: return "change_lane";
  }
  return "unknown";
}

std::optional<DangerTarget> danger_target_from_string(std::string_view text) {
  if (text == "angle") return DangerTarget::angle;
  if (text == "init_speed") return DangerTarget::init_speed;
  if (text == "change_lane" || text == "change_lanes") return DangerTarget::change_lane;
  return std::nullopt;
}

void DangerFactors::validate() const {
  if (targets.empty()) throw DomainError("danger factors need at least one target");
  if (!(intensity >= 0.0 && intensity <= 1.0)) throw DomainError("intensity must be in [0, 1]");
}

json to_json(const DangerFactors& f) {
  auto targets = json::array();
  for (auto t : f.targets) targets.push_back(to_string(t));
  return {{"description", f.description}, {"targets", targets}, {"intensity", f.intensity}};
}

DangerFactors danger_factors_from_json(const json& j) {
  DangerFactors f;
  f.description = j.value("description", "");
  if (j.contains("targets")) {
    f.targets.clear();
    for (const auto& t : j.at("targets")) {
      const auto parsed = danger_target_from_string(t.get<std::string>());
      if (!parsed) throw DomainError("unknown danger target '" + t.get<std::string>() + "'");
      f.targets.insert(*parsed);
    }
  }
  f.intensity = j.value("intensity", 0.5);
  f.validate();
  return f;
}

json to_json(const MutationResult& r) {
  return {{"params", params::to_json(r.params)},
          {"changed_fields", r.changed_fields},
          {"rationale", r.rationale}};
}

std::optional<DangerTarget> target_of(std::string_view locator) {
  if (locator.rfind("change_lanes", 0) == 0) return DangerTarget::change_lane;
  const auto dot = locator.rfind('.');
  if (dot == std::string_view::npos) return std::nullopt;
  const auto field = locator.substr(dot + 1);
  if (locator.rfind("roads[", 0) == 0 && field == "angle") return DangerTarget::angle;
  if (locator.rfind("cars[", 0) == 0 && field == "init_speed") return DangerTarget::init_speed;
  return std::nullopt;
}

std::vector<std::string> changed_fields(const ParameterSet& before, const ParameterSet& after) {
  std::vector<std::string> out;
  auto idx = [](const char* table, std::size_t i) {
    return std::string(table) + "[" + std::to_string(i) + "]";
  };
  for (std::size_t i = 0; i < std::max(before.roads.size(), after.roads.size()); ++i) {
    if (i >= before.roads.size() || i >= after.roads.size()) {
      out.push_back(idx("roads", i));
      continue;
    }
    const auto& a = before.roads[i];
    const auto& b = after.roads[i];
    if (a.road_id != b.road_id) out.push_back(idx("roads", i) + ".road_id");
    if (a.road_len != b.road_len) out.push_back(idx("roads", i) + ".road_len");
    if (a.angle != b.angle) out.push_back(idx("roads", i) + ".angle");
    if (a.left_num != b.left_num) out.push_back(idx("roads", i) + ".left_num");
    if (a.right_num != b.right_num) out.push_back(idx("roads", i) + ".right_num");
  }
  for (std::size_t i = 0; i < std::max(before.cars.size(), after.cars.size()); ++i) {
    if (i >= before.cars.size() || i >= after.cars.size()) {
      out.push_back(idx("cars", i));
      continue;
    }
    const auto ja = params::to_json(before.cars[i]);
    const auto jb = params::to_json(after.cars[i]);
    for (const auto& [field, value] : ja.items()) {
      if (jb.at(field) != value) out.push_back(idx("cars", i) + "." + field);
    }
  }
  for (std::size_t i = 0; i < std::max(before.change_lanes.size(), after.change_lanes.size());
       ++i) {
    if (i >= before.change_lanes.size() || i >= after.change_lanes.size()) {
      out.push_back(idx("change_lanes", i));
      continue;
    }
    const auto ja = params::to_json(before.change_lanes[i]);
    const auto jb = params::to_json(after.change_lanes[i]);
    for (const auto& [field, value] : ja.items()) {
      if (jb.at(field) != value) out.push_back(idx("change_lanes", i) + "." + field);
    }
  }
  return out;
}

llm::CompletionRequest mutation_request(const ParameterSet& p, const DangerFactors& factors) {
  std::string targets;
  for (auto t : factors.targets) {
    if (!targets.empty()) targets += ", ";
    targets += to_string(t);
  }
  const auto schemas = llm::builtin_schemas();
  llm::CompletionRequest req;
  req.schema_id = "overlay";
  req.system = std::string(llm::prompt_template("system_v1"));
  req.user = llm::render_template(llm::prompt_template("mutate_v1"),
                                  {{"description", factors.description},
                                   {"targets", targets},
                                   {"parameters", params::to_json(p).dump(2)},
                                   {"schema", schemas.find("overlay")->description}});
  return req;
}

namespace {

double number_field(const json& row, const std::string& field, const std::string& where) {
  if (!row.at(field).is_number()) {
    throw ContractError("overlay field " + where + "." + field + " must be a number");
  }
  return row.at(field).get<double>();
}

int int_field(const json& row, const std::string& field, const std::string& where) {
  const auto& v = row.at(field);
  if (!v.is_number()) throw ContractError("overlay field " + where + "." + field + " must be an integer");
  const double d = v.get<double>();
  if (d != std::floor(d)) throw ContractError("overlay field " + where + "." + field + " must be an integer");
  return static_cast<int>(d);
}

void require_target(const DangerFactors& f, DangerTarget t, const std::string& where) {
  if (!f.targets.count(t)) {
    throw ContractError("overlay touches " + where + ", outside the danger targets");
  }
}

ParameterSet apply_overlay(const ParameterSet& base, const json& overlay,
                           const DangerFactors& factors) {
  ParameterSet out = base;
  if (overlay.contains("roads")) {
    for (const auto& row : overlay.at("roads")) {
      const int id = row.at("road_id").get<int>();
      auto it = std::find_if(out.roads.begin(), out.roads.end(),
                             [&](const auto& r) { return r.road_id == id; });
      if (it == out.roads.end()) throw ContractError("overlay names unknown road " + std::to_string(id));
      const std::string where = "roads[road_id=" + std::to_string(id) + "]";
      for (const auto& [field, value] : row.items()) {
        if (field == "road_id") continue;
        if (field != "angle") throw ContractError("overlay touches " + where + "." + field + ", outside the danger targets");
        require_target(factors, DangerTarget::angle, where + ".angle");
        it->angle = number_field(row, field, where);
      }
    }
  }
  if (overlay.contains("cars")) {
    for (const auto& row : overlay.at("cars")) {
      const auto name = row.at("name").get<std::string>();
      const auto i = out.car_index(name);
      if (i < 0) throw ContractError("overlay names unknown car '" + name + "'");
      const std::string where = "cars[name=" + name + "]";
      for (const auto& [field, value] : row.items()) {
        if (field == "name") continue;
        if (field != "init_speed") throw ContractError("overlay touches " + where + "." + field + ", outside the danger targets");
        require_target(factors, DangerTarget::init_speed, where + ".init_speed");
        out.cars[static_cast<std::size_t>(i)].init_speed = number_field(row, field, where);
      }
    }
  }
  if (overlay.contains("change_lanes")) {
    for (const auto& row : overlay.at("change_lanes")) {
      const auto name = row.at("car_name").get<std::string>();
      const std::string where = "change_lanes[car_name=" + name + "]";
      require_target(factors, DangerTarget::change_lane, where);
      if (out.car_index(name) < 0) throw ContractError("overlay names unknown car '" + name + "'");
      for (const auto& [field, value] : row.items()) {
        if (field != "car_name" && field != "change_lane_pos" && field != "lane_id_after_change") {
          throw ContractError("overlay touches " + where + "." + field + ", outside the danger targets");
        }
      }
      auto it = std::find_if(out.change_lanes.begin(), out.change_lanes.end(),
                             [&](const auto& cl) { return cl.car_name == name; });
      if (it == out.change_lanes.end()) {
        if (!row.contains("change_lane_pos") || !row.contains("lane_id_after_change")) {
          throw ContractError("new lane change for '" + name + "' needs change_lane_pos and lane_id_after_change");
        }
        out.change_lanes.push_back({name, number_field(row, "change_lane_pos", where),
                                    int_field(row, "lane_id_after_change", where)});
      } else {
        if (row.contains("change_lane_pos")) it->change_lane_pos = number_field(row, "change_lane_pos", where);
        if (row.contains("lane_id_after_change")) {
          it->lane_id_after_change = int_field(row, "lane_id_after_change", where);
        }
      }
    }
  }
  return out;
}

std::vector<std::string> merge_unique(std::vector<std::string> a, const std::vector<std::string>& b) {
  for (const auto& s : b) {
    if (std::find(a.begin(), a.end(), s) == a.end()) a.push_back(s);
  }
  return a;
}

}  // namespace

MutationResult mutate_llm(const ParameterSet& p, const DangerFactors& factors,
                          const llm::Gateway& gateway, const llm::ProviderConfig& provider,
                          const road::IntersectionGeometry& geometry, std::uint64_t seed,
                          const params::ScenarioConfig& config) {
  factors.validate();
  if (!params::validate_params(p, geometry, config).empty()) {
    throw ContractError("mutation input must validate clean");
  }
  const auto request = mutation_request(p, factors);
  llm::CompletionResult reply;
  try {
    reply = gateway.complete_structured(request, provider);
  } catch (const GatewayError& e) {
    if (e.kind() != GatewayError::Kind::schema) throw;
    const auto& raws = e.raw_responses();
    throw MutatorError(e.what(), raws.empty() ? std::string() : raws.back());
  }

  const ParameterSet overlaid = apply_overlay(p, reply.parsed, factors);
  auto changed = changed_fields(p, overlaid);

  ParameterSet final_params = overlaid;
  const auto violations = params::validate_params(overlaid, geometry, config);
  if (!violations.empty()) {
    final_params = params::repair_params(overlaid, violations, seed, config);
  }
  changed = merge_unique(std::move(changed), changed_fields(p, final_params));

  for (const auto& field : changed) {
    const auto t = target_of(field);
    if (!t || !factors.targets.count(*t)) {
      throw ContractError("mutation changed " + field + ", outside the danger targets");
    }
  }
  if (!params::validate_params(final_params, geometry, config).empty()) {
    throw ContractError("mutated parameters failed to validate after repair");
  }
  return {std::move(final_params), std::move(changed), reply.parsed.value("rationale", "")};
}

double time_to_conflict(const params::CarSpec& car, double conflict_s) {
  if (!(car.init_speed > 0.0)) return kNever;
  return (conflict_s - car.init_pos) / car.init_speed;
}

const road::ConnectingRoad* route_of(const ParameterSet& p, std::size_t car_index,
                                     const road::IntersectionGeometry& geometry) {
  const auto& car = p.cars.at(car_index);
  int lane = car.init_lane_id;
  for (const auto& cl : p.change_lanes) {
    if (cl.car_name == car.name) lane = cl.lane_id_after_change;
  }
  return geometry.find_connection(car.init_road_id, lane, car.final_road_id);
}

namespace {

struct Hit {
  double s_a;
  double s_b;
  road::Point at;
};

std::optional<Hit> intersect(const road::Curve& a, const road::Curve& b) {
  constexpr int kSegments = 512;
  // Vehicles drive half a lane right of the connector's reference line.
  auto sample = [](const road::Curve& c) {
    std::vector<road::Point> pts;
    pts.reserve(kSegments + 1);
    for (int i = 0; i <= kSegments; ++i) {
      const double s = c.length * i / kSegments;
      const auto p = c.point_at(s);
      const double h = c.heading_at(s);
      const double off = 0.5 * road::kLaneWidth;
      pts.push_back({p.x + off * std::sin(h), p.y - off * std::cos(h)});
    }
    return pts;
  };
  const auto pa = sample(a);
  const auto pb = sample(b);
  for (int i = 0; i < kSegments; ++i) {
    const auto& p0 = pa[i];
    const auto& p1 = pa[i + 1];
    for (int j = 0; j < kSegments; ++j) {
      const auto& q0 = pb[j];
      const auto& q1 = pb[j + 1];
      const double rx = p1.x - p0.x, ry = p1.y - p0.y;
      const double sx = q1.x - q0.x, sy = q1.y - q0.y;
      const double denom = rx * sy - ry * sx;
      if (std::abs(denom) < 1e-12) continue;
      const double qpx = q0.x - p0.x, qpy = q0.y - p0.y;
      const double t = (qpx * sy - qpy * sx) / denom;
      const double u = (qpx * ry - qpy * rx) / denom;
      if (t >= 0.0 && t <= 1.0 && u >= 0.0 && u <= 1.0) {
        return Hit{a.length * (i + t) / kSegments, b.length * (j + u) / kSegments,
                   {p0.x + t * rx, p0.y + t * ry}};
      }
    }
  }
  return std::nullopt;
}

int priority(logical::ConflictKind kind) {
  switch (kind) {
    case logical::ConflictKind::crossing: return 0;
    case logical::ConflictKind::merging: return 1;
    case logical::ConflictKind::opposing_through: return 2;
    case logical::ConflictKind::diverging: return 3;
  }
  return 4;
}

}  // namespace

std::optional<ConflictPoint> locate_conflict(const ParameterSet& p, const logical::ConflictPair& pair,
                                             const road::IntersectionGeometry& geometry) {
  if (pair.car_a < 0 || pair.car_b < 0 || static_cast<std::size_t>(pair.car_a) >= p.cars.size() ||
      static_cast<std::size_t>(pair.car_b) >= p.cars.size()) {
    throw ContractError("conflict pair refers to a car outside the parameter set");
  }
  const auto* ra = route_of(p, static_cast<std::size_t>(pair.car_a), geometry);
  const auto* rb = route_of(p, static_cast<std::size_t>(pair.car_b), geometry);
  if (!ra || !rb) return std::nullopt;
  const auto* road_a = p.road(p.cars[pair.car_a].init_road_id);
  const auto* road_b = p.road(p.cars[pair.car_b].init_road_id);
  if (!road_a || !road_b) return std::nullopt;

  ConflictPoint cp{pair.car_a, pair.car_b, pair.kind, {}, 0.0, 0.0};
  if (pair.kind == logical::ConflictKind::merging) {
    const auto end = ra->path.end();
    const double h = ra->path.heading_at(ra->path.length);
    cp.location = {end.x + 0.5 * road::kLaneWidth * std::sin(h), end.y - 0.5 * road::kLaneWidth * std::cos(h)};
    cp.conflict_s_a = road_a->road_len + ra->path.length;
    cp.conflict_s_b = road_b->road_len + rb->path.length;
    return cp;
  }
  if (pair.kind == logical::ConflictKind::diverging) return std::nullopt;
  const auto hit = intersect(ra->path, rb->path);
  if (!hit) return std::nullopt;
  cp.location = hit->at;
  cp.conflict_s_a = road_a->road_len + hit->s_a;
  cp.conflict_s_b = road_b->road_len + hit->s_b;
  return cp;
}

MutationResult heuristic_criticality(const ParameterSet& p, const logical::ConflictReport& conflicts,
                                     const road::IntersectionGeometry& geometry,
                                     const params::ScenarioConfig& config) {
  if (!params::validate_params(p, geometry, config).empty()) {
    throw ContractError("heuristic input must validate clean");
  }
  std::vector<logical::ConflictPair> pairs;
  for (const auto& pair : conflicts.pairs) {
    if (pair.kind != logical::ConflictKind::diverging) {
      pairs.push_back({std::min(pair.car_a, pair.car_b), std::max(pair.car_a, pair.car_b), pair.kind});
    }
  }
  std::stable_sort(pairs.begin(), pairs.end(), [](const auto& x, const auto& y) {
    if (priority(x.kind) != priority(y.kind)) return priority(x.kind) < priority(y.kind);
    if (x.car_a != y.car_a) return x.car_a < y.car_a;
    return x.car_b < y.car_b;
  });

  for (const auto& pair : pairs) {
    const auto point = locate_conflict(p, pair, geometry);
    if (!point) continue;
    const auto& a = p.cars[pair.car_a];
    const auto& b = p.cars[pair.car_b];
    const double ta = time_to_conflict(a, point->conflict_s_a);
    const double tb = time_to_conflict(b, point->conflict_s_b);
    const std::string label = a.name + "/" + b.name + " (" + logical::to_string(pair.kind) + ")";
    if (std::isfinite(ta) && std::isfinite(tb) && std::abs(ta - tb) <= kCoArrivalTolerance) {
      return {p, {}, label + " already arrive within " + format_number(kCoArrivalTolerance) + " s"};
    }
    if (!std::isfinite(ta) && !std::isfinite(tb)) continue;

    const bool a_late = !std::isfinite(ta) || (std::isfinite(tb) && ta > tb);
    const std::size_t late = static_cast<std::size_t>(a_late ? pair.car_a : pair.car_b);
    const std::size_t early = static_cast<std::size_t>(a_late ? pair.car_b : pair.car_a);
    const double d_late = (a_late ? point->conflict_s_a : point->conflict_s_b) - p.cars[late].init_pos;
    const double d_early = (a_late ? point->conflict_s_b : point->conflict_s_a) - p.cars[early].init_pos;
    const double t_early = a_late ? tb : ta;
    const double t_late = a_late ? ta : tb;

    ParameterSet out = p;
    std::size_t changed = late;
    const double raised = d_late / t_early;
    if (raised >= config.v_min && raised <= config.v_max && raised > 0.0) {
      out.cars[late].init_speed = raised;
    } else if (std::isfinite(t_late)) {
      const double lowered = d_early / t_late;
      if (!(lowered >= config.v_min && lowered <= config.v_max && lowered > 0.0)) continue;
      out.cars[early].init_speed = lowered;
      changed = early;
    } else {
      continue;
    }
    MutationResult result;
    result.params = std::move(out);
    result.changed_fields = {"cars[" + std::to_string(changed) + "].init_speed"};
    result.rationale = label + ": " + p.cars[changed].name + " retimed from " +
                       format_number(p.cars[changed].init_speed) + " to " +
                       format_number(result.params.cars[changed].init_speed) +
                       " m/s so both reach the conflict point together";
    return result;
  }
  return {p, {}, "no conflicting pair with a shared point in the junction"};
}

}  // namespace scegen::mutation
