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

// Concrete-scenario parameter table: roads, cars and lane changes, with the
// validity checks and per-field random repair applied before emission.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "scegen/logical.hpp"
#include "scegen/random.hpp"
#include "scegen/road.hpp"
#include "scegen/violation.hpp"

namespace scegen::params {

using road::RoadSpec;

/// Vehicle catalog. Bounding boxes live in openscenario.cpp.
inline const std::vector<std::string>& vehicle_types() {
  static const std::vector<std::string> types = {"car", "truck", "motorcycle"};
  return types;
}

struct CarSpec {
  std::string name;
  std::string type = "car";
  /// s along the initial road, measured toward the junction.
  double init_pos = 0.0;
  double init_speed = 10.0;
  int init_road_id = 0;
  int init_lane_id = -1;
  /// s along the initial road where the car starts to veer.
  double turning_pos = 0.0;
  /// Distance from the junction along the final road where veering completes.
  double final_pos = 0.0;
  int final_road_id = 0;
  int final_lane_id = 1;

  bool operator==(const CarSpec&) const = default;
};

struct ChangeLaneSpec {
  std::string car_name;
  /// Distance the car travels before it starts changing lanes.
  double change_lane_pos = 0.0;
  int lane_id_after_change = -1;

  bool operator==(const ChangeLaneSpec&) const = default;
};

struct ParameterSet {
  std::vector<RoadSpec> roads;
  std::vector<CarSpec> cars;
  std::vector<ChangeLaneSpec> change_lanes;
  std::uint64_t seed = 0;

  const RoadSpec* road(int road_id) const;
  const CarSpec* car(std::string_view name) const;
  std::ptrdiff_t car_index(std::string_view name) const;

  bool operator==(const ParameterSet&) const = default;
};

struct ScenarioConfig {
  double v_min = 0.0;
  double v_max = 40.0;
  double sample_speed_min = 5.0;
  double sample_speed_max = 15.0;
  double min_separation = road::kDefaultMinSeparation;
};

/// Turns one logical scenario into a sampled parameter table. Cars keep the
/// scenario's order; car i is named "car<i>". Deterministic given `seed`.
ParameterSet concretize(const logical::LogicalScenario& scenario,
                        const road::IntersectionGeometry& geometry, std::uint64_t seed,
                        const ScenarioConfig& config = {});

/// Every invariant violation across the three tables. Empty means clean.
std::vector<Violation> validate_params(const ParameterSet& params,
                                       const road::IntersectionGeometry& geometry,
                                       const ScenarioConfig& config = {});

/// Resamples every violated field uniformly from its permitted domain and
/// leaves all other fields untouched. Throws RepairError for structural
/// violations.
ParameterSet repair_params(const ParameterSet& params, std::span<const Violation> violations,
                           std::uint64_t seed, const ScenarioConfig& config = {});

/// Permitted interval for roads[index].angle given the other angles.
std::pair<double, double> angle_bounds(std::span<const RoadSpec> roads, std::size_t index,
                                       double min_separation);

/// JSON mirroring the parameter table's field names.
nlohmann::json to_json(const ParameterSet& params);
ParameterSet params_from_json(const nlohmann::json& j);

nlohmann::json to_json(const CarSpec& car);
nlohmann::json to_json(const ChangeLaneSpec& change);

}  // namespace scegen::params
