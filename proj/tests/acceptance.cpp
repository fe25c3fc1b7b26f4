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

// Acceptance runner: one PASS/FAIL line per headline requirement. Exit status
// is non-zero when any line fails.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "param_fixtures.hpp"
#include "scegen/error.hpp"
#include "scegen/logical.hpp"
#include "scegen/mutation.hpp"
#include "scegen/openscenario.hpp"
#include "scegen/parsing.hpp"
#include "scegen/pipeline.hpp"
#include "scegen/road.hpp"
#include "scegen/xml.hpp"

using namespace scegen;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string join(const std::vector<int>& v) {
  std::string out;
  for (int x : v) out += (out.empty() ? "" : ",") + std::to_string(x);
  return out;
}

// --- enumeration ------------------------------------------------------------

Outcome enumeration_counts() {
  const auto t0 = Clock::now();
  const auto a = logical::FunctionalSpec::from_entries(3, std::vector<int>{0, 1, 2});
  const auto b = logical::FunctionalSpec::from_entries(4, std::vector<int>{0, 1, 2});
  const auto raw_a = logical::enumerate_raw(a).size();
  const auto raw_b = logical::enumerate_raw(b).size();
  const auto cls_a = logical::enumerate_classes(a, logical::Reduction::pattern).size();
  const auto cls_b = logical::enumerate_classes(b, logical::Reduction::pattern).size();
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << "n=3: raw " << raw_a << " classes " << cls_a << "; n=4: raw " << raw_b << " classes "
    << cls_b << "; " << secs << " s";
  return {raw_a == 8 && cls_a == 4 && raw_b == 27 && cls_b == 10 && secs < 1.0, d.str()};
}

Outcome raw_count_law() {
  int checked = 0;
  for (int n = 3; n <= 6; ++n) {
    for (int c = 1; c <= 6; ++c) {
      std::vector<int> entries;
      for (int i = 0; i < c; ++i) entries.push_back(i % n);
      const auto spec = logical::FunctionalSpec::from_entries(n, entries);
      const auto expected = static_cast<std::uint64_t>(std::llround(std::pow(n - 1, c)));
      if (expected > logical::kDefaultRawCap) continue;
      const auto got = logical::enumerate_raw(spec).size();
      if (got != expected || logical::raw_scenario_count(spec) != expected) {
        return {false, "n=" + std::to_string(n) + " c=" + std::to_string(c) + ": " +
                           std::to_string(got) + " != " + std::to_string(expected)};
      }
      ++checked;
    }
  }
  return {true, std::to_string(checked) + " (n, c) pairs match (n-1)^c"};
}

Outcome symmetry_law() {
  bool ok = true;
  std::ostringstream d;
  for (int n : {3, 4}) {
    std::vector<int> entries;
    for (int i = 0; i < n; ++i) entries.push_back(i);
    const auto spec = logical::FunctionalSpec::from_entries(n, entries);
    const auto patterns = logical::enumerate_classes(spec, logical::Reduction::pattern).size();
    const auto orbits = logical::enumerate_classes(spec, logical::Reduction::orbit).size();
    const auto oracle_orbits = oracle::orbit_count(n, entries);
    const auto binom = oracle::binomial(2 * n - 2, n);
    const bool row = patterns == binom && orbits == oracle_orbits && patterns == orbits;
    ok = ok && row;
    d << "n=c=" << n << ": patterns " << patterns << ", C(c+n-2,c) " << binom << ", orbits "
      << orbits << ", oracle orbits " << oracle_orbits << (row ? "" : " [mismatch]") << "; ";
  }
  return {ok, d.str()};
}

Outcome encoding_equivalence() {
  const auto spec = logical::FunctionalSpec::from_entries(3, std::vector<int>{0, 1, 2});
  const auto raw = logical::enumerate_raw(spec);
  const auto classes = logical::reduce_by_pattern(raw, 3);
  std::set<logical::MovementPattern> seen;
  std::size_t found = 0;
  for (const auto& s : raw) {
    const auto d = s.directions();
    if (d == std::vector<int>{1, 1, 2} || d == std::vector<int>{1, 2, 1} ||
        d == std::vector<int>{2, 1, 1}) {
      seen.insert(logical::movement_pattern(s));
      ++found;
    }
  }
  std::size_t holding = 0;
  for (const auto& c : classes) holding += seen.count(c.pattern);
  return {found == 3 && seen.size() == 1 && holding == 1,
          std::to_string(found) + " tuples, " + std::to_string(seen.size()) + " distinct pattern(s)"};
}

// --- stage 1 ------------------------------------------------------------------

Outcome stage1_fixtures() {
  const auto gw = testing::mock_gateway();
  int t_rows = 0, t_ok = 0, f_rows = 0, f_same = 0;
  std::string misses;
  for (const auto& c : testing::case_table().at("cases")) {
    const auto& expect = c.at("expect");
    const auto out = parsing::parse_description(c.at("description").get<std::string>(), *gw, {});
    const bool match = out.functional.num_entries == expect.at("num_entries").get<int>() &&
                       out.functional.entries() == expect.at("entries").get<std::vector<int>>() &&
                       out.unsupported.empty() != expect.at("unsupported").get<bool>();
    if (expect.at("table") == "T") {
      ++t_rows;
      if (match) {
        ++t_ok;
      } else {
        misses += " " + c.at("case").get<std::string>() + "=[" + join(out.functional.entries()) + "]";
      }
    } else {
      ++f_rows;
      f_same += match;
    }
  }
  return {t_ok == t_rows && t_rows > 0,
          std::to_string(t_ok) + "/" + std::to_string(t_rows) + " T rows match" +
              (misses.empty() ? "" : ";" + misses) + " (F rows: " + std::to_string(f_rows) +
              ", stable " + std::to_string(f_same) + ")"};
}

// --- parameters ---------------------------------------------------------------

Outcome validate_repair_property() {
  const auto t0 = Clock::now();
  std::mt19937_64 gen(987654321);
  for (int iter = 0; iter < 1000; ++iter) {
    const int n = 3 + static_cast<int>(gen() % 4);
    const int cars = 1 + static_cast<int>(gen() % 5);
    std::vector<int> entries;
    for (int i = 0; i < cars; ++i) entries.push_back(static_cast<int>(gen() % static_cast<unsigned>(n)));
    const auto f = testing::make(n, entries, gen(), 1 + static_cast<int>(gen() % 3),
                                 static_cast<int>(gen() % 50));
    const auto broken = testing::corrupt(f.params, gen);
    const auto violations = params::validate_params(broken, f.geometry);
    if (violations.empty()) return {false, "iteration " + std::to_string(iter) + ": corruption not detected"};
    std::set<std::string> flagged;
    for (const auto& v : violations) flagged.insert(v.path);
    const auto fixed = params::repair_params(broken, violations, static_cast<std::uint64_t>(iter));
    const auto after = params::validate_params(fixed, f.geometry);
    if (!after.empty()) {
      return {false, "iteration " + std::to_string(iter) + ": " + after.front().path + " still " +
                         after.front().rule};
    }
    for (const auto& field : mutation::changed_fields(broken, fixed)) {
      if (!flagged.count(field)) {
        return {false, "iteration " + std::to_string(iter) + ": repair touched " + field};
      }
    }
  }
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << "1000 sets clean after one pass, only flagged fields touched; " << secs << " s";
  return {secs < 10.0, d.str()};
}

// --- documents ----------------------------------------------------------------

std::optional<std::string> check_documents(const params::ParameterSet& p, const pipeline::Artifacts& a) {
  if (!road::validate_network(a.xodr).empty()) return "xodr findings";
  if (!params::validate_openscenario(a.xosc).empty()) return "xosc findings";
  const auto root = xml::parse(a.xosc);
  if (root.descendants("ScenarioObject").size() != p.cars.size()) return "entity count";
  const auto speeds = root.descendants("AbsoluteTargetSpeed");
  if (speeds.size() != p.cars.size()) return "speed count";
  std::multiset<double> triggers;
  for (const auto* t : root.descendants("TraveledDistanceCondition")) {
    triggers.insert(std::stod(t->attr_or("value")));
  }
  for (std::size_t i = 0; i < p.cars.size(); ++i) {
    if (std::abs(std::stod(speeds[i]->attr_or("value")) - p.cars[i].init_speed) > 1e-9) return "speed value";
    const double want = p.cars[i].turning_pos - p.cars[i].init_pos;
    bool hit = false;
    for (double t : triggers) hit |= std::abs(t - want) < 1e-9;
    if (!hit) return "turn trigger of " + p.cars[i].name;
  }
  const auto drive = xml::parse(a.xodr);
  if (drive.descendants("road").size() < p.roads.size()) return "road count";
  return std::nullopt;
}

Outcome document_suite() {
  int pairs = 0;
  for (int n : {3, 4}) {
    const auto spec = logical::FunctionalSpec::from_entries(n, std::vector<int>{0, 1, 2});
    const auto classes = logical::enumerate_classes(spec, logical::Reduction::pattern);
    for (std::size_t k = 0; k < classes.size(); ++k) {
      for (std::uint64_t seed : {1u, 42u}) {
        pipeline::GeometryInput in;
        in.lanes = {{1 + static_cast<int>(seed % 2), 1 + static_cast<int>(seed % 2)}};
        const auto c1 = pipeline::concretize_scenario(classes[k].representative, in, seed);
        const auto c2 = pipeline::concretize_scenario(classes[k].representative, in, seed);
        const auto a1 = pipeline::render(c1.params);
        const auto a2 = pipeline::render(c2.params);
        const std::string where = "n=" + std::to_string(n) + " class " + std::to_string(k);
        if (a1.xodr != a2.xodr || a1.xosc != a2.xosc || a1.params_json != a2.params_json) {
          return {false, where + ": output differs across runs"};
        }
        if (auto err = check_documents(c1.params, a1)) return {false, where + ": " + *err};
        ++pairs;
      }
    }
  }
  return {pairs == 2 * (4 + 10), std::to_string(pairs) + " xodr/xosc pairs valid and byte-stable"};
}

// --- mutation -----------------------------------------------------------------

Outcome criticality_heuristic() {
  const auto geometry = road::build_geometry(road::default_roads(4));
  logical::LogicalScenario s{4, {{0, 0, 2}, {1, 1, 2}}};
  auto p = params::concretize(s, geometry, 1);
  const auto conflicts = logical::conflict_matrix(s, 4);
  const auto pair = conflicts.between(0, 1);
  if (pair != logical::ConflictKind::crossing) return {false, "fixture pair is not crossing"};
  const auto point = mutation::locate_conflict(p, {0, 1, *pair}, geometry);
  if (!point) return {false, "paths do not meet"};
  for (auto* car : {&p.cars[0], &p.cars[1]}) {
    car->init_speed = 10.0;
    car->turning_pos = 50.0;
  }
  p.cars[0].init_pos = point->conflict_s_a - 40.0;
  p.cars[1].init_pos = point->conflict_s_b - 60.0;
  const auto r = mutation::heuristic_criticality(p, conflicts, geometry);
  const double ta = mutation::time_to_conflict(r.params.cars[0], point->conflict_s_a);
  const double tb = mutation::time_to_conflict(r.params.cars[1], point->conflict_s_b);
  const bool clean = params::validate_params(r.params, geometry).empty();
  std::ostringstream d;
  d << "speeds " << r.params.cars[0].init_speed << "/" << r.params.cars[1].init_speed
    << ", |dt| = " << std::abs(ta - tb) << " s, revalidation " << (clean ? "clean" : "dirty");
  return {std::abs(ta - tb) <= mutation::kCoArrivalTolerance && clean, d.str()};
}

pipeline::RunManifest fixture_manifest(const json& c, const fs::path& out) {
  const auto& build = testing::case_table().at("build");
  pipeline::RunManifest m;
  m.description = c.at("description").get<std::string>();
  m.reduction = logical::reduction_from_string(build.at("reduction").get<std::string>());
  m.seed = build.at("seed").get<std::uint64_t>();
  m.class_index = build.at("class").get<int>();
  m.geometry = pipeline::geometry_input_from_json(build.at("geometry"));
  m.mutate = pipeline::MutateMode::llm;
  m.out_dir = out.string();
  return m;
}

Outcome mutation_targeting() {
  const auto gw = testing::mock_gateway();
  const auto scratch = testing::scratch_dir("accept_mut");
  int cases = 0, fields = 0;
  for (const auto& c : testing::case_table().at("cases")) {
    const auto name = c.at("case").get<std::string>();
    const auto outputs = pipeline::run_build(fixture_manifest(c, scratch / name), gw.get(), {});
    const auto parsed = parsing::parse_description(c.at("description").get<std::string>(), *gw, {});
    for (const auto& o : outputs) {
      if (!o.mutation) return {false, name + ": no mutation ran"};
      for (const auto& f : o.mutation->changed_fields) {
        const auto t = mutation::target_of(f);
        if (!t || !parsed.danger.targets.count(*t)) return {false, name + ": changed " + f};
        ++fields;
      }
    }
    ++cases;
  }
  fs::remove_all(scratch);
  return {cases == 11, std::to_string(cases) + " cases, " + std::to_string(fields) +
                           " changed fields, all within angle/init_speed/change_lane and the case targets"};
}

// --- end to end -----------------------------------------------------------------

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) {
      files[fs::relative(e.path(), dir).string()] = pipeline::read_file(e.path().string());
    }
  }
  return files;
}

int run(const std::string& cmd) {
  return std::system((cmd + " > /dev/null 2>&1").c_str());
}

Outcome end_to_end_replay() {
  const std::string cli = SCEGEN_CLI_PATH;
  const std::string mock = testing::fixture_path("llm_mock.json");
  const auto dir = testing::scratch_dir("accept_e2e");
  std::string description;
  for (const auto& c : testing::case_table().at("cases")) {
    if (c.at("case") == "b.4") description = c.at("description");
  }
  pipeline::write_file_atomic((dir / "b4.txt").string(), description);

  struct Run {
    std::string first;
    std::string name;
  };
  const std::vector<Run> runs = {
      {cli + " build --entries 4 --cars 0,1,2 --class all --seed 3 --mutate heuristic" +
           " --lanes 2:2 --out " + (dir / "spec_a").string() + " --save-manifest " +
           (dir / "spec.json").string(),
       "spec"},
      {cli + " build --description " + (dir / "b4.txt").string() + " --mock-llm " + mock +
           " --class 0 --seed 7 --lanes 2:2 --road-len 50 --mutate llm --out " +
           (dir / "desc_a").string() + " --save-manifest " + (dir / "desc.json").string(),
       "desc"},
  };
  int compared = 0;
  for (const auto& r : runs) {
    if (run(r.first) != 0) return {false, r.name + " build failed: " + r.first};
    const auto replay = cli + " build --manifest " + (dir / (r.name + ".json")).string() +
                        " --mock-llm " + mock + " --out " + (dir / (r.name + "_b")).string();
    if (run(replay) != 0) return {false, r.name + " replay failed"};
    const auto a = snapshot(dir / (r.name + "_a"));
    const auto b = snapshot(dir / (r.name + "_b"));
    if (a.empty() || a != b) return {false, r.name + ": replayed artifacts differ"};
    compared += static_cast<int>(a.size());
  }
  fs::remove_all(dir);
  return {true, std::to_string(compared) + " files byte-identical after manifest replay"};
}

}  // namespace

int main() {
  llm::forbid_network(true);
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"enumeration-counts", enumeration_counts},
      {"raw-count-law", raw_count_law},
      {"symmetry-class-law", symmetry_law},
      {"encoding-equivalence", encoding_equivalence},
      {"stage1-fixture-suite", stage1_fixtures},
      {"validate-repair-property", validate_repair_property},
      {"document-suite", document_suite},
      {"criticality-heuristic", criticality_heuristic},
      {"mutation-targeting", mutation_targeting},
      {"end-to-end-determinism", end_to_end_replay},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.ok;
    std::cout << (o.ok ? "PASS " : "FAIL ") << name << ": " << o.detail << "\n";
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria pass\n";
  return failed == 0 ? 0 : 1;
}
