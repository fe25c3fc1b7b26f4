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

#include "scegen/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "scegen/error.hpp"
#include "scegen/openscenario.hpp"
#include "scegen/parsing.hpp"

namespace scegen::pipeline {

using nlohmann::json;
namespace fs = std::filesystem;

json to_json(const GeometryInput& in) {
  auto lanes = json::array();
  for (const auto& l : in.lanes) lanes.push_back({{"left", l.left}, {"right", l.right}});
  return {{"angles_deg", in.angles_deg}, {"lanes", lanes}, {"road_len", in.road_len}};
}

GeometryInput geometry_input_from_json(const json& j) {
  GeometryInput in;
  if (j.is_null()) return in;
  if (j.contains("angles_deg") && !j.at("angles_deg").is_null()) {
    in.angles_deg = j.at("angles_deg").get<std::vector<double>>();
  } else if (j.contains("angles") && !j.at("angles").is_null()) {
    in.angles_deg = j.at("angles").get<std::vector<double>>();
  }
  if (j.contains("lanes") && !j.at("lanes").is_null()) {
    for (const auto& l : j.at("lanes")) {
      in.lanes.push_back({l.value("left", 1), l.value("right", 1)});
    }
  }
  in.road_len = j.value("road_len", road::kDefaultRoadLength);
  return in;
}

std::vector<road::RoadSpec> make_roads(int n, const GeometryInput& in, double min_separation) {
  if (n < 3) throw ValidationError("a junction needs at least 3 legs");
  if (!(in.road_len > road::kDefaultJunctionRadius)) {
    throw ValidationError("road_len must exceed the junction radius");
  }
  auto roads = road::default_roads(n, in.road_len);
  if (!in.angles_deg.empty()) {
    if (static_cast<int>(in.angles_deg.size()) != n) {
      throw ValidationError("expected " + std::to_string(n) + " angles, got " +
                            std::to_string(in.angles_deg.size()));
    }
    for (int i = 0; i < n; ++i) roads[i].angle = deg_to_rad(in.angles_deg[i]);
  }
  if (!in.lanes.empty()) {
    if (in.lanes.size() != 1 && static_cast<int>(in.lanes.size()) != n) {
      throw ValidationError("lanes must list one entry or one per leg");
    }
    for (int i = 0; i < n; ++i) {
      const auto& l = in.lanes.size() == 1 ? in.lanes[0] : in.lanes[i];
      if (l.left < 1 || l.right < 1 || l.left > 4 || l.right > 4) {
        throw ValidationError("lane counts must be in [1, 4]");
      }
      roads[i].left_num = l.left;
      roads[i].right_num = l.right;
    }
  }
  for (int i = 0; i < n; ++i) {
    const auto [lo, hi] = params::angle_bounds(roads, static_cast<std::size_t>(i), min_separation);
    const double a = roads[i].angle;
    const bool ok = i == 0 ? (a >= lo && a < hi) : (a >= lo - 1e-12 && a <= hi + 1e-12);
    if (!ok) {
      throw ValidationError("angle of leg " + std::to_string(i) + " (" +
                            format_number(rad_to_deg(a)) + " deg) is outside [" +
                            format_number(rad_to_deg(lo)) + ", " + format_number(rad_to_deg(hi)) +
                            "] deg");
    }
  }
  return roads;
}

Concrete concretize_scenario(const logical::LogicalScenario& scenario, const GeometryInput& input,
                             std::uint64_t seed, const params::ScenarioConfig& config) {
  const auto roads = make_roads(scenario.num_entries, input, config.min_separation);
  Concrete out;
  try {
    out.geometry = road::build_geometry(roads, {road::kDefaultJunctionRadius, config.min_separation});
  } catch (const GeometryError& e) {
    throw ValidationError(e.what());
  }
  out.params = params::concretize(scenario, out.geometry, seed, config);
  return out;
}

Artifacts render(const params::ParameterSet& p, const params::ScenarioConfig& config) {
  const auto geometry =
      road::build_geometry(p.roads, {road::kDefaultJunctionRadius, config.min_separation});
  Artifacts out;
  out.xodr = road::emit_opendrive(geometry).text;
  out.xosc = params::emit_openscenario(p, geometry, kXodrFile, config).text;
  out.params_json = params::to_json(p).dump(2) + "\n";
  return out;
}

std::string to_string(MutateMode mode) {
  switch (mode) {
    case MutateMode::none: return "none";
    case MutateMode::heuristic: return "heuristic";
    case MutateMode::llm: return "llm";
  }
  return "none";
}

MutateMode mutate_mode_from_string(std::string_view text) {
  if (text == "none" || text.empty()) return MutateMode::none;
  if (text == "heuristic") return MutateMode::heuristic;
  if (text == "llm") return MutateMode::llm;
  throw DomainError("unknown mutation mode '" + std::string(text) + "'");
}

std::uint64_t mutation_seed(std::uint64_t seed) { return seed ^ 0xA24BAED4963EE407ULL; }

mutation::MutationResult run_mutation(MutateMode mode, const Concrete& concrete,
                                      const logical::LogicalScenario& scenario,
                                      const mutation::DangerFactors& factors,
                                      const llm::Gateway* gateway,
                                      const llm::ProviderConfig& provider, std::uint64_t seed,
                                      const params::ScenarioConfig& config) {
  switch (mode) {
    case MutateMode::none: return {concrete.params, {}, ""};
    case MutateMode::heuristic:
      return mutation::heuristic_criticality(
          concrete.params, logical::conflict_matrix(scenario, scenario.num_entries),
          concrete.geometry, config);
    case MutateMode::llm:
      if (!gateway) throw DomainError("LLM mutation needs a gateway (configure one or use --mock-llm)");
      return mutation::mutate_llm(concrete.params, factors, *gateway, provider, concrete.geometry,
                                  mutation_seed(seed), config);
  }
  throw DomainError("unknown mutation mode");
}

void RunManifest::validate() const {
  if (description.has_value() == spec.has_value()) {
    throw DomainError("a manifest needs exactly one of description or spec");
  }
  if (out_dir.empty()) throw DomainError("a manifest needs an output directory");
  if (class_index && *class_index < 0) throw DomainError("class index must be non-negative");
  if (spec) spec->validate();
}

json to_json(const RunManifest& m) {
  json j = {{"reduction", logical::to_string(m.reduction)},
            {"seed", m.seed},
            {"out_dir", m.out_dir},
            {"class", m.class_index ? json(*m.class_index) : json("all")},
            {"geometry", to_json(m.geometry)},
            {"mutate", to_string(m.mutate)},
            {"factors", m.factors},
            {"targets", m.targets},
            {"raw_cap", m.raw_cap}};
  j["description"] = m.description ? json(*m.description) : json(nullptr);
  j["spec"] = m.spec ? logical::to_json(*m.spec) : json(nullptr);
  return j;
}

RunManifest manifest_from_json(const json& j) {
  RunManifest m;
  if (j.contains("description") && !j.at("description").is_null()) {
    m.description = j.at("description").get<std::string>();
  }
  if (j.contains("spec") && !j.at("spec").is_null()) {
    m.spec = logical::functional_spec_from_json(j.at("spec"));
  }
  m.reduction = logical::reduction_from_string(j.value("reduction", "pattern"));
  m.seed = j.value("seed", std::uint64_t{0});
  m.out_dir = j.value("out_dir", "");
  const auto cls = j.value("class", json("all"));
  if (cls.is_number_integer()) {
    m.class_index = cls.get<int>();
  } else if (!(cls.is_string() && cls.get<std::string>() == "all")) {
    throw DomainError("class must be an index or \"all\"");
  }
  m.geometry = geometry_input_from_json(j.value("geometry", json(nullptr)));
  m.mutate = mutate_mode_from_string(j.value("mutate", "none"));
  m.factors = j.value("factors", "");
  m.targets = j.value("targets", std::vector<std::string>{});
  m.raw_cap = j.value("raw_cap", logical::kDefaultRawCap);
  m.validate();
  return m;
}

void write_file_atomic(const std::string& path, std::string_view content) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("cannot write " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<BuildOutput> run_build(const RunManifest& m, const llm::Gateway* gateway,
                                   const llm::ProviderConfig& provider,
                                   const params::ScenarioConfig& config) {
  m.validate();
  logical::FunctionalSpec spec;
  mutation::DangerFactors factors;
  factors.description = m.factors;
  if (m.description) {
    if (!gateway) throw DomainError("parsing a description needs a gateway");
    const auto parsed = parsing::parse_description(*m.description, *gateway, provider);
    spec = parsed.functional;
    factors = parsed.danger;
    if (!m.factors.empty()) factors.description = m.factors;
  } else {
    spec = *m.spec;
  }
  if (!m.targets.empty()) {
    factors.targets.clear();
    for (const auto& t : m.targets) {
      const auto parsed = mutation::danger_target_from_string(t);
      if (!parsed) throw DomainError("unknown danger target '" + t + "'");
      factors.targets.insert(*parsed);
    }
  }
  factors.validate();

  const auto classes = logical::enumerate_classes(spec, m.reduction, m.raw_cap);
  std::vector<int> chosen;
  if (m.class_index) {
    if (*m.class_index >= static_cast<int>(classes.size())) {
      throw DomainError("class " + std::to_string(*m.class_index) + " does not exist (" +
                        std::to_string(classes.size()) + " classes)");
    }
    chosen.push_back(*m.class_index);
  } else {
    for (int k = 0; k < static_cast<int>(classes.size()); ++k) chosen.push_back(k);
  }

  std::vector<BuildOutput> outputs;
  for (int k : chosen) {
    BuildOutput out;
    out.class_index = k;
    out.cls = classes[static_cast<std::size_t>(k)];
    const auto& scenario = out.cls.representative;
    const auto concrete = concretize_scenario(scenario, m.geometry, m.seed, config);
    out.params = concrete.params;
    if (m.mutate != MutateMode::none) {
      out.mutation =
          run_mutation(m.mutate, concrete, scenario, factors, gateway, provider, m.seed, config);
      out.params = out.mutation->params;
    }
    out.artifacts = render(out.params, config);

    const fs::path dir = m.class_index ? fs::path(m.out_dir)
                                       : fs::path(m.out_dir) / ("class_" + std::to_string(k));
    const auto put = [&](const char* name, const std::string& text) {
      const auto path = (dir / name).string();
      write_file_atomic(path, text);
      out.files.push_back(path);
    };
    put(kXodrFile, out.artifacts.xodr);
    put(kXoscFile, out.artifacts.xosc);
    put(kParamsFile, out.artifacts.params_json);
    if (out.mutation) {
      json record = mutation::to_json(*out.mutation);
      record["original"] = params::to_json(concrete.params);
      record["mode"] = to_string(m.mutate);
      put(kMutationFile, record.dump(2) + "\n");
    }
    outputs.push_back(std::move(out));
  }
  return outputs;
}

}  // namespace scegen::pipeline
