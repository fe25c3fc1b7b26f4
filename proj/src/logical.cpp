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

#include "scegen/logical.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <unordered_map>

#include "scegen/error.hpp"

namespace scegen::logical {

void FunctionalSpec::validate() const {
  if (num_entries < 3) {
    throw DomainError("num_entries must be >= 3, got " + std::to_string(num_entries));
  }
  std::set<int> ids;
  for (const auto& car : cars) {
    if (car.entry < 0 || car.entry >= num_entries) {
      throw DomainError("car " + std::to_string(car.car_id) + " entry " +
                        std::to_string(car.entry) + " outside [0, " +
                        std::to_string(num_entries) + ")");
    }
    if (!ids.insert(car.car_id).second) {
      throw DomainError("duplicate car id " + std::to_string(car.car_id));
    }
  }
}

std::vector<int> FunctionalSpec::entries() const {
  std::vector<int> out;
  out.reserve(cars.size());
  for (const auto& c : cars) out.push_back(c.entry);
  return out;
}

FunctionalSpec FunctionalSpec::from_entries(int num_entries, std::span<const int> entries) {
  FunctionalSpec spec{num_entries, {}};
  for (std::size_t i = 0; i < entries.size(); ++i) {
    spec.cars.push_back({static_cast<int>(i), entries[i]});
  }
  spec.validate();
  return spec;
}

std::vector<int> LogicalScenario::directions() const {
  std::vector<int> out;
  out.reserve(moves.size());
  for (const auto& m : moves) out.push_back(m.direction);
  return out;
}

std::vector<int> LogicalScenario::exits() const {
  std::vector<int> out;
  out.reserve(moves.size());
  for (const auto& m : moves) out.push_back(exit_point(m.entry, m.direction, num_entries));
  return out;
}

MovementPattern movement_pattern(const LogicalScenario& scenario) {
  MovementPattern p;
  for (const auto& m : scenario.moves) ++p[m.direction];
  return p;
}

std::string pattern_label(const MovementPattern& pattern) {
  std::string out = "(";
  bool first = true;
  for (const auto& [dir, count] : pattern) {
    for (int i = 0; i < count; ++i) {
      if (!first) out += ',';
      out += std::to_string(dir);
      first = false;
    }
  }
  return out + ")";
}

std::string to_string(Reduction mode) { return mode == Reduction::pattern ? "pattern" : "orbit"; }

Reduction reduction_from_string(std::string_view text) {
  if (text == "pattern") return Reduction::pattern;
  if (text == "orbit") return Reduction::orbit;
  throw DomainError("unknown reduction mode '" + std::string(text) + "'");
}

std::string to_string(ConflictKind kind) {
  switch (kind) {
    case ConflictKind::crossing: return "crossing";
    case ConflictKind::merging: return "merging";
    case ConflictKind::diverging: return "diverging";
    case ConflictKind::opposing_through: return "opposing-through";
  }
  return "unknown";
}

std::optional<ConflictKind> ConflictReport::between(int car_a, int car_b) const {
  for (const auto& p : pairs) {
    if ((p.car_a == car_a && p.car_b == car_b) || (p.car_a == car_b && p.car_b == car_a)) {
      return p.kind;
    }
  }
  return std::nullopt;
}

int exit_point(int entry, int direction, int num_entries) {
  if (num_entries < 3) throw DomainError("num_entries must be >= 3");
  if (entry < 0 || entry >= num_entries) {
    throw DomainError("entry " + std::to_string(entry) + " outside [0, " +
                      std::to_string(num_entries) + ")");
  }
  if (direction < 1 || direction > num_entries - 1) {
    throw DomainError("direction " + std::to_string(direction) + " outside [1, " +
                      std::to_string(num_entries - 1) + "]");
  }
  return (entry + direction) % num_entries;
}

std::uint64_t raw_scenario_count(const FunctionalSpec& spec) {
  const std::uint64_t base = static_cast<std::uint64_t>(spec.num_entries - 1);
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < spec.cars.size(); ++i) {
    if (total > std::numeric_limits<std::uint64_t>::max() / base) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    total *= base;
  }
  return total;
}

std::vector<LogicalScenario> enumerate_raw(const FunctionalSpec& spec, std::uint64_t cap) {
  spec.validate();
  const std::uint64_t total = raw_scenario_count(spec);
  if (total > cap) {
    throw CapacityError("raw scenario count " + std::to_string(total) + " exceeds cap " +
                            std::to_string(cap),
                        total, cap);
  }
  const int n = spec.num_entries;
  const std::size_t c = spec.cars.size();

  std::vector<LogicalScenario> out;
  out.reserve(static_cast<std::size_t>(total));
  std::vector<int> dirs(c, 1);
  for (std::uint64_t k = 0; k < total; ++k) {
    LogicalScenario s{n, {}};
    s.moves.reserve(c);
    for (std::size_t i = 0; i < c; ++i) {
      s.moves.push_back({spec.cars[i].car_id, spec.cars[i].entry, dirs[i]});
    }
    out.push_back(std::move(s));
    // Odometer increment, last car fastest.
    for (std::size_t i = c; i-- > 0;) {
      if (++dirs[i] <= n - 1) break;
      dirs[i] = 1;
    }
  }
  return out;
}

namespace {

void check_same_spec(std::span<const LogicalScenario> scenarios, int num_entries) {
  if (scenarios.empty()) return;
  const auto& first = scenarios.front();
  for (const auto& s : scenarios) {
    if (s.num_entries != num_entries) {
      throw DomainError("scenario has " + std::to_string(s.num_entries) + " entries, expected " +
                        std::to_string(num_entries));
    }
    if (s.moves.size() != first.moves.size()) {
      throw DomainError("scenarios disagree on car count");
    }
    for (std::size_t i = 0; i < s.moves.size(); ++i) {
      const auto& m = s.moves[i];
      if (m.car_id != first.moves[i].car_id || m.entry != first.moves[i].entry) {
        throw DomainError("scenarios disagree on car placement");
      }
      exit_point(m.entry, m.direction, num_entries);
    }
  }
}

template <typename Key>
std::vector<PatternClass> group_by(std::span<const LogicalScenario> scenarios,
                                   const std::vector<Key>& keys) {
  std::map<Key, std::size_t> index;
  std::vector<PatternClass> classes;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    auto [it, inserted] = index.try_emplace(keys[i], classes.size());
    if (inserted) {
      classes.push_back({movement_pattern(scenarios[i]), scenarios[i], 0});
    }
    auto& cls = classes[it->second];
    ++cls.members;
    if (scenarios[i].directions() < cls.representative.directions()) {
      cls.representative = scenarios[i];
    }
  }
  std::sort(classes.begin(), classes.end(), [](const PatternClass& a, const PatternClass& b) {
    return a.representative.directions() < b.representative.directions();
  });
  return classes;
}

using PairMultiset = std::vector<std::pair<int, int>>;

PairMultiset rotated(const LogicalScenario& s, int k, int n) {
  PairMultiset out;
  out.reserve(s.moves.size());
  for (const auto& m : s.moves) out.emplace_back((m.entry + k) % n, m.direction);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<PatternClass> reduce_by_pattern(std::span<const LogicalScenario> scenarios,
                                            int num_entries) {
  check_same_spec(scenarios, num_entries);
  std::vector<MovementPattern> keys;
  keys.reserve(scenarios.size());
  for (const auto& s : scenarios) keys.push_back(movement_pattern(s));
  return group_by(scenarios, keys);
}

std::vector<PatternClass> rotation_orbits(std::span<const LogicalScenario> scenarios,
                                          int num_entries) {
  check_same_spec(scenarios, num_entries);
  // Canonical orbit key: lexicographic minimum over all rotations of the
  // (entry, direction) multiset.
  std::vector<PairMultiset> keys;
  keys.reserve(scenarios.size());
  for (const auto& s : scenarios) {
    PairMultiset best = rotated(s, 0, num_entries);
    for (int k = 1; k < num_entries; ++k) best = std::min(best, rotated(s, k, num_entries));
    keys.push_back(std::move(best));
  }
  return group_by(scenarios, keys);
}

std::vector<PatternClass> enumerate_classes(const FunctionalSpec& spec, Reduction mode,
                                            std::uint64_t cap) {
  const auto raw = enumerate_raw(spec, cap);
  return mode == Reduction::pattern ? reduce_by_pattern(raw, spec.num_entries)
                                    : rotation_orbits(raw, spec.num_entries);
}

namespace {

// True when b lies strictly inside the counter-clockwise arc from a to c.
bool strictly_between(int a, int b, int c, int n) {
  const int ab = ((b - a) % n + n) % n;
  const int ac = ((c - a) % n + n) % n;
  return ab > 0 && ab < ac;
}

}  // namespace

ConflictReport conflict_matrix(const LogicalScenario& scenario, int num_entries) {
  ConflictReport report;
  const auto exits = scenario.exits();
  const auto& moves = scenario.moves;
  for (std::size_t i = 0; i < moves.size(); ++i) {
    for (std::size_t j = i + 1; j < moves.size(); ++j) {
      const int ea = moves[i].entry, xa = exits[i];
      const int eb = moves[j].entry, xb = exits[j];
      std::optional<ConflictKind> kind;
      if (xa == xb) {
        kind = ConflictKind::merging;
      } else if (ea == eb) {
        kind = ConflictKind::diverging;
      } else if (ea == xb && eb == xa) {
        kind = ConflictKind::opposing_through;
      } else if (eb != xa && xb != ea &&
                 strictly_between(ea, eb, xa, num_entries) !=
                     strictly_between(ea, xb, xa, num_entries)) {
        kind = ConflictKind::crossing;
      }
      if (kind) report.pairs.push_back({moves[i].car_id, moves[j].car_id, *kind});
    }
  }
  return report;
}

nlohmann::json to_json(const FunctionalSpec& spec) {
  auto cars = nlohmann::json::array();
  for (const auto& c : spec.cars) cars.push_back({{"id", c.car_id}, {"entry", c.entry}});
  return {{"num_entries", spec.num_entries},
          {"num_cars", spec.cars.size()},
          {"entries", spec.entries()},
          {"cars", cars}};
}

FunctionalSpec functional_spec_from_json(const nlohmann::json& j) {
  FunctionalSpec spec;
  spec.num_entries = j.at("num_entries").get<int>();
  if (j.contains("cars")) {
    for (const auto& c : j.at("cars")) {
      spec.cars.push_back({c.at("id").get<int>(), c.at("entry").get<int>()});
    }
  } else {
    const auto entries = j.at("entries").get<std::vector<int>>();
    for (std::size_t i = 0; i < entries.size(); ++i) {
      spec.cars.push_back({static_cast<int>(i), entries[i]});
    }
  }
  spec.validate();
  return spec;
}

nlohmann::json to_json(const LogicalScenario& scenario) {
  auto cars = nlohmann::json::array();
  const auto exits = scenario.exits();
  for (std::size_t i = 0; i < scenario.moves.size(); ++i) {
    const auto& m = scenario.moves[i];
    cars.push_back(
        {{"id", m.car_id}, {"entry", m.entry}, {"direction", m.direction}, {"exit", exits[i]}});
  }
  auto pattern = nlohmann::json::object();
  for (const auto& [dir, count] : movement_pattern(scenario)) {
    pattern[std::to_string(dir)] = count;
  }
  return {{"n", scenario.num_entries}, {"cars", cars}, {"pattern", pattern}};
}

LogicalScenario scenario_from_json(const nlohmann::json& j) {
  LogicalScenario s{j.at("n").get<int>(), {}};
  for (const auto& c : j.at("cars")) {
    s.moves.push_back(
        {c.at("id").get<int>(), c.at("entry").get<int>(), c.at("direction").get<int>()});
  }
  for (const auto& m : s.moves) exit_point(m.entry, m.direction, s.num_entries);
  return s;
}

nlohmann::json to_json(const ConflictReport& report) {
  auto arr = nlohmann::json::array();
  for (const auto& p : report.pairs) {
    arr.push_back({{"car_a", p.car_a}, {"car_b", p.car_b}, {"kind", to_string(p.kind)}});
  }
  return arr;
}

nlohmann::json to_json(const PatternClass& cls, bool with_conflicts) {
  auto pattern = nlohmann::json::object();
  for (const auto& [dir, count] : cls.pattern) pattern[std::to_string(dir)] = count;
  nlohmann::json j = {{"pattern", pattern},
                      {"label", pattern_label(cls.pattern)},
                      {"representative", to_json(cls.representative)},
                      {"members", cls.members}};
  if (with_conflicts) {
    j["conflicts"] =
        to_json(conflict_matrix(cls.representative, cls.representative.num_entries));
  }
  return j;
}

}  // namespace scegen::logical
