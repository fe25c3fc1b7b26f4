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

// Parameter-table builders shared by the unit and acceptance tests.

#include <limits>
#include <random>

#include "scegen/logical.hpp"
#include "scegen/params.hpp"
#include "scegen/road.hpp"

namespace scegen::testing {

using params::ParameterSet;

struct Fixture {
  road::IntersectionGeometry geometry;
  ParameterSet params;
};

inline Fixture make(int n, std::vector<int> entries, std::uint64_t seed, int lanes = 1, int pick = 0) {
  auto roads = road::default_roads(n, 50.0, lanes, lanes);
  Fixture f{road::build_geometry(roads), {}};
  const auto raw = logical::enumerate_raw(logical::FunctionalSpec::from_entries(n, entries));
  f.params = params::concretize(raw[static_cast<std::size_t>(pick) % raw.size()], f.geometry, seed);
  return f;
}

/// Corrupts a random selection of repairable fields of a clean set.
inline ParameterSet corrupt(ParameterSet p, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  bool touched = false;
  while (!touched) {
    for (std::size_t i = 0; i < p.roads.size(); ++i) {
      if (u(gen) < 0.1) {
        // 0.05 rad is fine for the first leg but too tight for any other.
        const double choices[] = {-0.5, 7.5, nan, 0.05};
        p.roads[i].angle = choices[gen() % (i == 0 ? 3 : 4)];
        touched = true;
      }
    }
    for (auto& c : p.cars) {
      if (u(gen) < 0.15) { c.init_speed = (gen() % 2) ? -3.0 : 120.0; touched = true; }
      if (u(gen) < 0.1) { c.init_pos = (gen() % 2) ? -1.0 : 80.0; touched = true; }
      if (u(gen) < 0.1) { c.turning_pos = c.init_pos - 1.0; touched = true; }
      if (u(gen) < 0.1) { c.final_pos = 500.0; touched = true; }
      if (u(gen) < 0.1) { c.init_lane_id = (gen() % 2) ? 2 : -9; touched = true; }
      if (u(gen) < 0.1) { c.final_lane_id = (gen() % 2) ? 0 : 9; touched = true; }
      if (u(gen) < 0.05) { c.type = "bus"; touched = true; }
      if (u(gen) < 0.15) {
        const bool bad_pos = gen() % 2;
        p.change_lanes.push_back({c.name, bad_pos ? 999.0 : 1.0, bad_pos ? -1 : -7});
        touched = true;
      }
    }
  }
  return p;
}


}  // namespace scegen::testing
