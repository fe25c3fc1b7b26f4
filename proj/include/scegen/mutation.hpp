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

// Criticality-raising mutation of a concrete parameter set.

#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "scegen/llm.hpp"
#include "scegen/logical.hpp"
#include "scegen/params.hpp"
#include "scegen/road.hpp"

namespace scegen::mutation {

enum class DangerTarget { angle, init_speed, change_lane };

std::string to_string(DangerTarget target);
std::optional<DangerTarget> danger_target_from_string(std::string_view text);

struct DangerFactors {
  std::string description;
  std::set<DangerTarget> targets = {DangerTarget::angle, DangerTarget::init_speed,
                                    DangerTarget::change_lane};
  double intensity = 0.5;

  void validate() const;
};

nlohmann::json to_json(const DangerFactors& factors);
DangerFactors danger_factors_from_json(const nlohmann::json& j);

struct MutationResult {
  params::ParameterSet params;
  /// Locators such as `cars[1].init_speed`, `roads[2].angle`, `change_lanes[0]`.
  std::vector<std::string> changed_fields;
  std::string rationale;
};

nlohmann::json to_json(const MutationResult& result);

/// Danger target a field locator belongs to, if any.
std::optional<DangerTarget> target_of(std::string_view locator);

/// Field-level difference between two parameter sets over the same tables.
std::vector<std::string> changed_fields(const params::ParameterSet& before,
                                        const params::ParameterSet& after);

/// The prompt sent to the mutator for these inputs.
llm::CompletionRequest mutation_request(const params::ParameterSet& params,
                                        const DangerFactors& factors);

/// Asks the gateway for a partial overlay restricted to `factors.targets`,
/// applies it, then validates and repairs. Throws ContractError for dirty
/// input or an overlay touching a field outside the targets, MutatorError when
/// no usable overlay arrives within the retry budget.
MutationResult mutate_llm(const params::ParameterSet& params, const DangerFactors& factors,
                          const llm::Gateway& gateway, const llm::ProviderConfig& provider,
                          const road::IntersectionGeometry& geometry, std::uint64_t seed,
                          const params::ScenarioConfig& config = {});

inline constexpr double kNever = std::numeric_limits<double>::infinity();
inline constexpr double kCoArrivalTolerance = 0.1;

/// Seconds until the car reaches travel coordinate `conflict_s` at constant
/// speed. Travel coordinate: s on the initial road, continuing onto the
/// connecting road past road_len. Returns kNever for non-positive speed.
double time_to_conflict(const params::CarSpec& car, double conflict_s);

struct ConflictPoint {
  int car_a = 0;
  int car_b = 0;
  logical::ConflictKind kind = logical::ConflictKind::crossing;
  road::Point location;
  /// Travel coordinates of the point for each car.
  double conflict_s_a = 0.0;
  double conflict_s_b = 0.0;
};

/// The connecting road a car uses through the junction, after its lane changes.
const road::ConnectingRoad* route_of(const params::ParameterSet& params, std::size_t car_index,
                                     const road::IntersectionGeometry& geometry);

/// Where the two cars' lane-centre paths through the junction meet, if they
/// do. Car ids index params.cars.
std::optional<ConflictPoint> locate_conflict(const params::ParameterSet& params,
                                             const logical::ConflictPair& pair,
                                             const road::IntersectionGeometry& geometry);

/// Deterministic stand-in for the LLM mutator: takes the highest-priority pair
/// (crossing, then merging, then opposing-through; ties by smaller car index)
/// whose paths meet and retimes one car so both arrive within 0.1 s.
MutationResult heuristic_criticality(const params::ParameterSet& params,
                                     const logical::ConflictReport& conflicts,
                                     const road::IntersectionGeometry& geometry,
                                     const params::ScenarioConfig& config = {});

}  // namespace scegen::mutation
