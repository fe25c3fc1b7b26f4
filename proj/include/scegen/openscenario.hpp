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

#include <string_view>

#include "scegen/document.hpp"
#include "scegen/params.hpp"
#include "scegen/road.hpp"

namespace scegen::params {

/// OpenSCENARIO 1.1 subset for a clean parameter set: one ScenarioObject per
/// car, lane-position teleport plus absolute speed in Init, a trajectory
/// through the junction connecting road started once the car has travelled
/// turning_pos - init_pos, and one distance-triggered lane change per
/// ChangeLaneSpec. Throws ContractError when `params` does not validate.
ScenarioDocument emit_openscenario(const ParameterSet& params,
                                   const road::IntersectionGeometry& geometry,
                                   std::string_view xodr_path,
                                   const ScenarioConfig& config = {});

/// Structural checks on an OpenSCENARIO document: every entityRef names a
/// ScenarioObject and the RoadNetwork references a logic file.
std::vector<Violation> validate_openscenario(std::string_view xml_text);

}  // namespace scegen::params
