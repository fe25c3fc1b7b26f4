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

// Logical traffic scenarios at an n-leg uncontrolled intersection.
//
// Every car picks a symbolic direction d in [1, n-1] and leaves through exit
// (entry + d) mod n. Raw enumeration yields (n-1)^c scenarios; pattern
// reduction groups them by the multiset of chosen directions, orbit reduction
// by the cyclic relabelling of entry legs.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace scegen::logical {

inline constexpr std::uint64_t kDefaultRawCap = 1'000'000;

struct CarEntry {
  int car_id = 0;
  int entry = 0;

  bool operator==(const CarEntry&) const = default;
};

struct FunctionalSpec {
  int num_entries = 0;
  std::vector<CarEntry> cars;

  /// Throws DomainError when an invariant is broken.
  void validate() const;
  std::vector<int> entries() const;

  /// Cars get ids 0..k-1 in the order given.
  static FunctionalSpec from_entries(int num_entries, std::span<const int> entries);

  bool operator==(const FunctionalSpec&) const = default;
};

struct SymbolicMove {
  int car_id = 0;
  int entry = 0;
  int direction = 0;

  bool operator==(const SymbolicMove&) const = default;
};

struct LogicalScenario {
  int num_entries = 0;
  std::vector<SymbolicMove> moves;

  std::vector<int> directions() const;
  std::vector<int> exits() const;

  bool operator==(const LogicalScenario&) const = default;
};

/// direction -> number of cars taking it.
using MovementPattern = std::map<int, int>;

MovementPattern movement_pattern(const LogicalScenario& scenario);

/// "(1,1,2)": the pattern's directions in ascending order.
std::string pattern_label(const MovementPattern& pattern);

struct PatternClass {
  MovementPattern pattern;
  LogicalScenario representative;
  std::uint64_t members = 0;
};

enum class Reduction { pattern, orbit };

std::string to_string(Reduction mode);
Reduction reduction_from_string(std::string_view text);

enum class ConflictKind { crossing, merging, diverging, opposing_through };

std::string to_string(ConflictKind kind);

struct ConflictPair {
  int car_a = 0;
  int car_b = 0;
  ConflictKind kind = ConflictKind::crossing;

  bool operator==(const ConflictPair&) const = default;
};

/// Pairs are listed once with car_a < car_b; `between` answers in either order.
struct ConflictReport {
  std::vector<ConflictPair> pairs;

  std::optional<ConflictKind> between(int car_a, int car_b) const;
};

int exit_point(int entry, int direction, int num_entries);

/// (n-1)^c, saturating at UINT64_MAX.
std::uint64_t raw_scenario_count(const FunctionalSpec& spec);

/// All direction assignments, ordered lexicographically by (car, direction).
/// Throws CapacityError when the count exceeds `cap`.
std::vector<LogicalScenario> enumerate_raw(const FunctionalSpec& spec,
                                           std::uint64_t cap = kDefaultRawCap);

/// Groups scenarios by movement pattern. The representative of each class is
/// its lexicographically smallest direction tuple; classes are ordered by
/// representative.
std::vector<PatternClass> reduce_by_pattern(std::span<const LogicalScenario> scenarios,
                                            int num_entries);

/// Orbit partition under the cyclic group acting on entry indices. Cars that
/// share an entry are interchangeable. Same ordering rules as reduce_by_pattern.
std::vector<PatternClass> rotation_orbits(std::span<const LogicalScenario> scenarios,
                                          int num_entries);

std::vector<PatternClass> enumerate_classes(const FunctionalSpec& spec, Reduction mode,
                                            std::uint64_t cap = kDefaultRawCap);

/// Classifies every car pair by comparing (entry, exit) chords on the n-gon.
ConflictReport conflict_matrix(const LogicalScenario& scenario, int num_entries);

nlohmann::json to_json(const FunctionalSpec& spec);
FunctionalSpec functional_spec_from_json(const nlohmann::json& j);

/// {n, cars:[{id, entry, direction, exit}], pattern:{direction: count}}
nlohmann::json to_json(const LogicalScenario& scenario);
LogicalScenario scenario_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ConflictReport& report);
nlohmann::json to_json(const PatternClass& cls, bool with_conflicts = true);

/// Entries equally spaced on a circle, one arrow per car from entry to exit.
/// Cars involved in a crossing conflict are drawn in a highlight colour.
std::string render_svg(const LogicalScenario& scenario, const ConflictReport* conflicts = nullptr);

}  // namespace scegen::logical
