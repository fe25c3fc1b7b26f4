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

#include "scegen/road.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "scegen/error.hpp"
#include "scegen/xml.hpp"

namespace scegen::road {

Point Curve::point_at(double s) const {
  if (std::abs(curvature) < 1e-12) {
    return {start.x + s * std::cos(heading), start.y + s * std::sin(heading)};
  }
  const double h = heading + curvature * s;
  return {start.x + (std::sin(h) - std::sin(heading)) / curvature,
          start.y - (std::cos(h) - std::cos(heading)) / curvature};
}

double Curve::heading_at(double s) const { return heading + curvature * s; }

std::vector<RoadSpec> IntersectionGeometry::roads() const {
  std::vector<RoadSpec> out;
  out.reserve(legs.size());
  for (const auto& leg : legs) out.push_back(leg.spec);
  return out;
}

std::optional<std::size_t> IntersectionGeometry::leg_index(int road_id) const {
  for (std::size_t i = 0; i < legs.size(); ++i) {
    if (legs[i].spec.road_id == road_id) return i;
  }
  return std::nullopt;
}

const LegGeometry* IntersectionGeometry::leg_by_road(int road_id) const {
  const auto idx = leg_index(road_id);
  return idx ? &legs[*idx] : nullptr;
}

const ConnectingRoad* IntersectionGeometry::find_connection(int incoming_road_id,
                                                            int incoming_lane_id,
                                                            int outgoing_road_id) const {
  for (const auto& c : connections) {
    if (c.incoming_road_id == incoming_road_id && c.incoming_lane_id == incoming_lane_id &&
        c.outgoing_road_id == outgoing_road_id) {
      return &c;
    }
  }
  return nullptr;
}

std::vector<double> cumulative_headings(std::span<const RoadSpec> roads) {
  std::vector<double> out;
  out.reserve(roads.size());
  double sum = 0.0;
  for (const auto& r : roads) {
    sum += r.angle;
    out.push_back(normalize_angle(sum));
  }
  return out;
}

namespace {

std::string leg_name(std::size_t index, const RoadSpec& r) {
  return "leg " + std::to_string(index) + " (road " + std::to_string(r.road_id) + ")";
}

Point unit(double heading) { return {std::cos(heading), std::sin(heading)}; }

Curve fit_connector(Point from, double from_heading, Point to, double to_heading) {
  const double dx = to.x - from.x;
  const double dy = to.y - from.y;
  const double chord = std::hypot(dx, dy);
  const double chord_heading = std::atan2(dy, dx);
  if (std::abs(wrap_pi(to_heading - from_heading)) < deg_to_rad(1.0)) {
    return {from, normalize_angle(chord_heading), chord, 0.0};
  }
  const double alpha = wrap_pi(chord_heading - from_heading);
  if (std::abs(alpha) < 1e-12) return {from, normalize_angle(from_heading), chord, 0.0};
  const double curvature = 2.0 * std::sin(alpha) / chord;
  const double length = chord * alpha / std::sin(alpha);
  return {from, normalize_angle(from_heading), length, curvature};
}

}  // namespace

IntersectionGeometry build_geometry(std::span<const RoadSpec> roads,
                                    const GeometryOptions& options) {
  if (roads.size() < 3) {
    throw GeometryError("a junction needs at least 3 roads, got " + std::to_string(roads.size()));
  }
  if (!(options.junction_radius > 0.0)) throw GeometryError("junction radius must be positive");

  std::set<int> ids;
  for (std::size_t i = 0; i < roads.size(); ++i) {
    const auto& r = roads[i];
    if (!ids.insert(r.road_id).second) {
      throw GeometryError("duplicate road id " + std::to_string(r.road_id));
    }
    if (!std::isfinite(r.road_len) || r.road_len <= 0.0) {
      throw GeometryError(leg_name(i, r) + " has non-positive length");
    }
    if (!std::isfinite(r.angle)) throw GeometryError(leg_name(i, r) + " has a non-finite angle");
    if (r.left_num < 0 || r.right_num < 0 || r.left_num + r.right_num < 1) {
      throw GeometryError(leg_name(i, r) + " has an invalid lane count");
    }
  }

  const double min_sep = options.min_separation;
  double span = 0.0;
  for (std::size_t i = 1; i < roads.size(); ++i) {
    if (roads[i].angle < min_sep) {
      throw GeometryError(leg_name(i - 1, roads[i - 1]) + " and " + leg_name(i, roads[i]) +
                          " are " + format_number(rad_to_deg(roads[i].angle)) +
                          " deg apart, minimum " + format_number(rad_to_deg(min_sep)) + " deg");
    }
    span += roads[i].angle;
  }
  if (kTwoPi - span < min_sep) {
    const std::size_t last = roads.size() - 1;
    throw GeometryError(leg_name(last, roads[last]) + " and " + leg_name(0, roads[0]) + " are " +
                        format_number(rad_to_deg(kTwoPi - span)) + " deg apart, minimum " +
                        format_number(rad_to_deg(min_sep)) + " deg");
  }

  IntersectionGeometry g;
  g.radius = options.junction_radius;
  const auto headings = cumulative_headings(roads);
  for (std::size_t i = 0; i < roads.size(); ++i) {
    const double h = headings[i];
    const Point u = unit(h);
    const double outer = g.radius + roads[i].road_len;
    LegGeometry leg;
    leg.spec = roads[i];
    leg.heading = h;
    leg.reference = {{outer * u.x, outer * u.y}, normalize_angle(h + kPi), roads[i].road_len, 0.0};
    g.legs.push_back(leg);
  }

  g.junction_id = *ids.rbegin() + 1;
  int next_id = g.junction_id + 1;
  for (std::size_t i = 0; i < g.legs.size(); ++i) {
    const auto& in = g.legs[i];
    const Point in_boundary = in.reference.end();
    // Right of the inbound direction.
    const Point in_normal{-std::sin(in.heading), std::cos(in.heading)};
    for (int k = 1; k <= in.spec.right_num; ++k) {
      const double off = (k - 1) * kLaneWidth;
      const Point from{in_boundary.x + off * in_normal.x, in_boundary.y + off * in_normal.y};
      for (std::size_t j = 0; j < g.legs.size(); ++j) {
        if (j == i) continue;
        const auto& out = g.legs[j];
        if (out.spec.left_num == 0) continue;
        const int m = std::min(k, out.spec.left_num);
        const Point out_boundary = out.reference.end();
        const double out_off = (m - 1) * kLaneWidth;
        const Point to{out_boundary.x + out_off * std::sin(out.heading),
                       out_boundary.y - out_off * std::cos(out.heading)};
        ConnectingRoad c;
        c.id = next_id++;
        c.incoming_road_id = in.spec.road_id;
        c.incoming_lane_id = -k;
        c.outgoing_road_id = out.spec.road_id;
        c.outgoing_lane_id = m;
        c.path = fit_connector(from, in.heading + kPi, to, out.heading);
        g.connections.push_back(c);
      }
    }
  }
  return g;
}

std::vector<RoadSpec> default_roads(int n, double road_len, int left_num, int right_num) {
  if (n < 3) throw DomainError("a junction needs at least 3 roads");
  std::vector<RoadSpec> roads;
  for (int i = 0; i < n; ++i) {
    roads.push_back({i, road_len, i == 0 ? 0.0 : kTwoPi / n, left_num, right_num});
  }
  return roads;
}

namespace {

xml::Element lane_element(int id, std::string type, bool with_width) {
  xml::Element lane("lane");
  lane.attr("id", id).attr("type", std::move(type)).attr("level", "false");
  if (with_width) {
    lane.child("width")
        .attr("sOffset", "0")
        .attr("a", kLaneWidth)
        .attr("b", "0")
        .attr("c", "0")
        .attr("d", "0");
  }
  lane.child("roadMark")
      .attr("sOffset", "0")
      .attr("type", id == 0 ? "solid" : "broken")
      .attr("weight", "standard")
      .attr("color", "standard")
      .attr("width", "0.12");
  return lane;
}

xml::Element plan_view(const Curve& c) {
  xml::Element pv("planView");
  auto& geo = pv.child("geometry");
  geo.attr("s", "0")
      .attr("x", c.start.x)
      .attr("y", c.start.y)
      .attr("hdg", c.heading)
      .attr("length", c.length);
  if (c.curvature == 0.0) {
    geo.child("line");
  } else {
    geo.child("arc").attr("curvature", c.curvature);
  }
  return pv;
}

}  // namespace

ScenarioDocument emit_opendrive(const IntersectionGeometry& g) {
  xml::Element root("OpenDRIVE");
  root.child("header")
      .attr("revMajor", "1")
      .attr("revMinor", "6")
      .attr("name", "scegen_junction")
      .attr("version", "1.00")
      .attr("north", "0")
      .attr("south", "0")
      .attr("east", "0")
      .attr("west", "0")
      .attr("vendor", "scegen");

  for (std::size_t i = 0; i < g.legs.size(); ++i) {
    const auto& leg = g.legs[i];
    auto& road = root.child("road");
    road.attr("name", "leg_" + std::to_string(i))
        .attr("length", leg.spec.road_len)
        .attr("id", leg.spec.road_id)
        .attr("junction", "-1")
        .attr("rule", "RHT");
    road.child("link")
        .child("successor")
        .attr("elementType", "junction")
        .attr("elementId", g.junction_id);
    road.child("type").attr("s", "0").attr("type", "town");
    road.add(plan_view(leg.reference));
    auto& section = road.child("lanes").child("laneSection");
    section.attr("s", "0");
    if (leg.spec.left_num > 0) {
      auto& left = section.child("left");
      for (int k = leg.spec.left_num; k >= 1; --k) left.add(lane_element(k, "driving", true));
    }
    section.child("center").add(lane_element(0, "none", false));
    if (leg.spec.right_num > 0) {
      auto& right = section.child("right");
      for (int k = 1; k <= leg.spec.right_num; ++k) right.add(lane_element(-k, "driving", true));
    }
  }

  for (const auto& c : g.connections) {
    auto& road = root.child("road");
    road.attr("name", "conn_" + std::to_string(c.id))
        .attr("length", c.path.length)
        .attr("id", c.id)
        .attr("junction", g.junction_id)
        .attr("rule", "RHT");
    auto& link = road.child("link");
    link.child("predecessor")
        .attr("elementType", "road")
        .attr("elementId", c.incoming_road_id)
        .attr("contactPoint", "end");
    link.child("successor")
        .attr("elementType", "road")
        .attr("elementId", c.outgoing_road_id)
        .attr("contactPoint", "end");
    road.child("type").attr("s", "0").attr("type", "town");
    road.add(plan_view(c.path));
    auto& section = road.child("lanes").child("laneSection");
    section.attr("s", "0");
    section.child("center").add(lane_element(0, "none", false));
    auto lane = lane_element(-1, "driving", true);
    auto& lane_link = lane.child("link");
    lane_link.child("predecessor").attr("id", c.incoming_lane_id);
    lane_link.child("successor").attr("id", c.outgoing_lane_id);
    // Keep <link> ahead of <width>, as the schema orders lane children.
    std::rotate(lane.children.begin(), lane.children.end() - 1, lane.children.end());
    section.child("right").add(std::move(lane));
  }

  auto& junction = root.child("junction");
  junction.attr("name", "junction_" + std::to_string(g.junction_id)).attr("id", g.junction_id);
  int connection_id = 0;
  for (const auto& c : g.connections) {
    auto& conn = junction.child("connection");
    conn.attr("id", connection_id++)
        .attr("incomingRoad", c.incoming_road_id)
        .attr("connectingRoad", c.id)
        .attr("contactPoint", "start");
    conn.child("laneLink").attr("from", c.incoming_lane_id).attr("to", "-1");
  }

  ScenarioDocument doc{DocumentKind::opendrive, xml::to_string(root), {}};
  doc.report = validate_network(doc.text);
  return doc;
}

namespace {

struct RoadInfo {
  std::set<int> lanes;
};

std::optional<int> to_int(const std::string* text) {
  if (!text) return std::nullopt;
  try {
    std::size_t pos = 0;
    const int v = std::stoi(*text, &pos);
    if (pos != text->size()) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::string describe_ids(const std::set<int>& ids) {
  std::string out = "{";
  bool first = true;
  for (int id : ids) {
    if (!first) out += ',';
    out += std::to_string(id);
    first = false;
  }
  return out + "}";
}

}  // namespace

std::vector<Violation> validate_network(std::string_view xml_text) {
  const xml::Node root = xml::parse(xml_text);
  std::vector<Violation> found;
  auto add = [&](std::string path, std::string rule, std::string observed, std::string bounds) {
    found.push_back({std::move(path), std::move(rule), std::move(observed), std::move(bounds),
                     false});
  };

  if (root.name != "OpenDRIVE") {
    add("/", "root-element", root.name, "OpenDRIVE");
    return found;
  }

  std::map<int, RoadInfo> roads;
  std::set<int> junctions;
  for (const auto* j : root.all("junction")) {
    const auto id = to_int(j->find_attr("id"));
    if (!id) {
      add("junction", "missing-id", j->attr_or("id"), "integer");
    } else if (!junctions.insert(*id).second) {
      add("junction[id=" + std::to_string(*id) + "]", "duplicate-id", std::to_string(*id),
          "unique");
    }
  }

  const auto road_nodes = root.all("road");
  for (const auto* r : road_nodes) {
    const auto id = to_int(r->find_attr("id"));
    if (!id) {
      add("road", "missing-id", r->attr_or("id"), "integer");
      continue;
    }
    const std::string path = "road[id=" + std::to_string(*id) + "]";
    if (roads.count(*id)) {
      add(path, "duplicate-id", std::to_string(*id), "unique");
      continue;
    }
    RoadInfo info;
    const auto* lanes = r->first("lanes");
    const auto* section = lanes ? lanes->first("laneSection") : nullptr;
    if (!section) {
      add(path + ".lanes", "lane-section-missing", "none", "laneSection");
    } else {
      std::set<int> left, right;
      bool has_center = false;
      for (const auto* side_name : {"left", "center", "right"}) {
        const auto* side = section->first(side_name);
        if (!side) continue;
        for (const auto* lane : side->all("lane")) {
          const auto lid = to_int(lane->find_attr("id"));
          if (!lid) {
            add(path + ".lane", "missing-id", lane->attr_or("id"), "integer");
            continue;
          }
          if (!info.lanes.insert(*lid).second) {
            add(path + ".lane[id=" + std::to_string(*lid) + "]", "duplicate-id",
                std::to_string(*lid), "unique");
          }
          if (*lid > 0) left.insert(*lid);
          if (*lid < 0) right.insert(-*lid);
          if (*lid == 0) has_center = true;
        }
      }
      if (!has_center) add(path + ".lanes.center", "center-lane-missing", "none", "{0}");
      if (!left.empty() && (*left.begin() != 1 || *left.rbegin() != static_cast<int>(left.size()))) {
        add(path + ".lanes.left", "non-contiguous-lanes", describe_ids(left),
            "{1.." + std::to_string(left.size()) + "}");
      }
      if (!right.empty() &&
          (*right.begin() != 1 || *right.rbegin() != static_cast<int>(right.size()))) {
        std::set<int> neg;
        for (int v : right) neg.insert(-v);
        add(path + ".lanes.right", "non-contiguous-lanes", describe_ids(neg),
            "{-" + std::to_string(right.size()) + "..-1}");
      }
    }
    roads.emplace(*id, std::move(info));
  }

  auto lane_exists = [&](int road, int lane) {
    const auto it = roads.find(road);
    return it != roads.end() && it->second.lanes.count(lane) > 0;
  };

  for (const auto* r : road_nodes) {
    const auto id = to_int(r->find_attr("id"));
    if (!id) continue;
    const std::string path = "road[id=" + std::to_string(*id) + "]";
    const auto jattr = to_int(r->find_attr("junction"));
    if (jattr && *jattr != -1 && !junctions.count(*jattr)) {
      add(path + ".junction", "dangling-reference", std::to_string(*jattr), "existing junction id");
    }
    std::map<std::string, int> linked_roads;
    if (const auto* link = r->first("link")) {
      for (const auto* end : {"predecessor", "successor"}) {
        const auto* node = link->first(end);
        if (!node) continue;
        const auto target = to_int(node->find_attr("elementId"));
        const std::string type = node->attr_or("elementType", "road");
        const std::string where = path + ".link." + end;
        if (!target) {
          add(where, "dangling-reference", node->attr_or("elementId"), "integer id");
        } else if (type == "junction") {
          if (!junctions.count(*target)) {
            add(where, "dangling-reference", std::to_string(*target), "existing junction id");
          }
        } else if (!roads.count(*target)) {
          add(where, "dangling-reference", std::to_string(*target), "existing road id");
        } else {
          linked_roads[end] = *target;
        }
      }
    }
    const auto* lanes = r->first("lanes");
    const auto* section = lanes ? lanes->first("laneSection") : nullptr;
    if (!section) continue;
    for (const auto* lane : section->descendants("lane")) {
      const auto* link = lane->first("link");
      if (!link) continue;
      for (const auto* end : {"predecessor", "successor"}) {
        const auto* node = link->first(end);
        if (!node) continue;
        const auto target_lane = to_int(node->find_attr("id"));
        const auto it = linked_roads.find(end);
        if (it == linked_roads.end()) continue;  // nothing to resolve against
        if (!target_lane || !lane_exists(it->second, *target_lane)) {
          add(path + ".lane[id=" + lane->attr_or("id") + "].link." + end,
              "dangling-lane-reference", node->attr_or("id"),
              "lane of road " + std::to_string(it->second));
        }
      }
    }
  }

  for (const auto* j : root.all("junction")) {
    const std::string jpath = "junction[id=" + j->attr_or("id") + "]";
    for (const auto* c : j->all("connection")) {
      const std::string cpath = jpath + ".connection[id=" + c->attr_or("id") + "]";
      const auto incoming = to_int(c->find_attr("incomingRoad"));
      const auto connecting = to_int(c->find_attr("connectingRoad"));
      bool ok = true;
      if (!incoming || !roads.count(*incoming)) {
        add(cpath + ".incomingRoad", "dangling-reference", c->attr_or("incomingRoad"),
            "existing road id");
        ok = false;
      }
      if (!connecting || !roads.count(*connecting)) {
        add(cpath + ".connectingRoad", "dangling-reference", c->attr_or("connectingRoad"),
            "existing road id");
        ok = false;
      }
      if (!ok) continue;
      for (const auto* ll : c->all("laneLink")) {
        const auto from = to_int(ll->find_attr("from"));
        const auto to = to_int(ll->find_attr("to"));
        if (!from || !lane_exists(*incoming, *from)) {
          add(cpath + ".laneLink.from", "dangling-lane-reference", ll->attr_or("from"),
              "lane of road " + std::to_string(*incoming));
        }
        if (!to || !lane_exists(*connecting, *to)) {
          add(cpath + ".laneLink.to", "dangling-lane-reference", ll->attr_or("to"),
              "lane of road " + std::to_string(*connecting));
        }
      }
    }
  }
  return found;
}

nlohmann::json geometry_json(const IntersectionGeometry& g) {
  auto legs = nlohmann::json::array();
  for (const auto& leg : g.legs) {
    legs.push_back({{"id", leg.spec.road_id},
                    {"heading", leg.heading},
                    {"length", leg.spec.road_len},
                    {"left", leg.spec.left_num},
                    {"right", leg.spec.right_num}});
  }
  auto conns = nlohmann::json::array();
  for (const auto& c : g.connections) {
    conns.push_back({{"id", c.id},
                     {"incoming_road_id", c.incoming_road_id},
                     {"incoming_lane_id", c.incoming_lane_id},
                     {"outgoing_road_id", c.outgoing_road_id},
                     {"outgoing_lane_id", c.outgoing_lane_id},
                     {"length", c.path.length}});
  }
  return {{"legs", legs}, {"radius", g.radius}, {"junction_id", g.junction_id},
          {"connections", conns}};
}

nlohmann::json to_json(const RoadSpec& r) {
  return {{"road_id", r.road_id},
          {"road_len", r.road_len},
          {"angle", r.angle},
          {"left_num", r.left_num},
          {"right_num", r.right_num}};
}

RoadSpec road_from_json(const nlohmann::json& j) {
  return {j.at("road_id").get<int>(), j.at("road_len").get<double>(), j.at("angle").get<double>(),
          j.at("left_num").get<int>(), j.at("right_num").get<int>()};
}

}  // namespace scegen::road
