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

// n-leg junction geometry and its OpenDRIVE rendering.
//
// Each leg's reference line runs from its outer end toward the junction and
// stops on a circle of radius R around the origin. Right lanes (negative ids)
// therefore drive into the junction, left lanes (positive ids) drive out.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "scegen/document.hpp"
#include "scegen/format.hpp"
#include "scegen/violation.hpp"

namespace scegen::road {

inline constexpr double kLaneWidth = 3.5;
inline constexpr double kDefaultJunctionRadius = 15.0;
inline constexpr double kDefaultMinSeparation = deg_to_rad(20.0);
inline constexpr double kDefaultRoadLength = 50.0;

struct RoadSpec {
  int road_id = 0;
  double road_len = kDefaultRoadLength;
  /// Radians, relative to the previous road (the first road: relative to +x).
  double angle = 0.0;
  int left_num = 1;
  int right_num = 1;

  bool operator==(const RoadSpec&) const = default;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// A line (curvature 0) or circular arc in the plane.
struct Curve {
  Point start;
  double heading = 0.0;
  double length = 0.0;
  double curvature = 0.0;

  Point point_at(double s) const;
  double heading_at(double s) const;
  Point end() const { return point_at(length); }
};

struct LegGeometry {
  RoadSpec spec;
  /// Outward direction of the leg, normalised to [0, 2π).
  double heading = 0.0;
  /// Reference line; ends on the junction circle.
  Curve reference;
};

struct ConnectingRoad {
  int id = 0;
  int incoming_road_id = 0;
  int incoming_lane_id = 0;
  int outgoing_road_id = 0;
  int outgoing_lane_id = 0;
  Curve path;
};

struct GeometryOptions {
  double junction_radius = kDefaultJunctionRadius;
  double min_separation = kDefaultMinSeparation;
};

struct IntersectionGeometry {
  std::vector<LegGeometry> legs;
  int junction_id = 0;
  double radius = kDefaultJunctionRadius;
  std::vector<ConnectingRoad> connections;

  std::vector<RoadSpec> roads() const;
  /// Index of the leg carrying `road_id`, or nullopt.
  std::optional<std::size_t> leg_index(int road_id) const;
  const LegGeometry* leg_by_road(int road_id) const;
  const ConnectingRoad* find_connection(int incoming_road_id, int incoming_lane_id,
                                        int outgoing_road_id) const;
};

/// Cumulative headings Σ_{j<=i} angle_j, normalised to [0, 2π).
std::vector<double> cumulative_headings(std::span<const RoadSpec> roads);

/// Throws GeometryError naming the offending legs when two headings are closer
/// than the minimum separation or the spec is otherwise unusable.
IntersectionGeometry build_geometry(std::span<const RoadSpec> roads,
                                    const GeometryOptions& options = {});

/// n equally spaced legs with ids 0..n-1.
std::vector<RoadSpec> default_roads(int n, double road_len = kDefaultRoadLength, int left_num = 1,
                                    int right_num = 1);

ScenarioDocument emit_opendrive(const IntersectionGeometry& geometry);

/// Structural checks over any OpenDRIVE text. Throws XmlParseError on malformed input.
std::vector<Violation> validate_network(std::string_view xml_text);

/// {legs:[{id, heading, length, left, right}], radius}
nlohmann::json geometry_json(const IntersectionGeometry& geometry);

nlohmann::json to_json(const RoadSpec& road);
RoadSpec road_from_json(const nlohmann::json& j);

}  // namespace scegen::road
