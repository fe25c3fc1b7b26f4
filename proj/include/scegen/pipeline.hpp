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

// The stage-2/3 pipeline shared by the CLI and the service, so both produce
// identical documents for identical inputs and seeds.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scegen/document.hpp"
#include "scegen/llm.hpp"
#include "scegen/logical.hpp"
#include "scegen/mutation.hpp"
#include "scegen/params.hpp"
#include "scegen/road.hpp"

namespace scegen::pipeline {

inline constexpr const char* kXodrFile = "scenario.xodr";
inline constexpr const char* kXoscFile = "scenario.xosc";
inline constexpr const char* kParamsFile = "params.json";
inline constexpr const char* kMutationFile = "mutation.json";

struct LaneCounts {
  int left = 1;
  int right = 1;
};

/// User-facing geometry options. Angles are degrees and follow RoadSpec.angle:
/// the first relative to +x, each later one relative to the previous leg.
struct GeometryInput {
  std::vector<double> angles_deg;  // empty: equal spacing
  std::vector<LaneCounts> lanes;   // empty: 1/1 per leg; one entry: every leg
  double road_len = road::kDefaultRoadLength;
};

nlohmann::json to_json(const GeometryInput& input);
GeometryInput geometry_input_from_json(const nlohmann::json& j);

/// Road table for an n-leg junction. Throws ValidationError on bad input.
std::vector<road::RoadSpec> make_roads(int num_entries, const GeometryInput& input,
                                       double min_separation = road::kDefaultMinSeparation);

struct Concrete {
  road::IntersectionGeometry geometry;
  params::ParameterSet params;
};

Concrete concretize_scenario(const logical::LogicalScenario& scenario, const GeometryInput& input,
                             std::uint64_t seed, const params::ScenarioConfig& config = {});

struct Artifacts {
  std::string xodr;
  std::string xosc;
  std::string params_json;
};

/// Documents for a clean parameter set. The geometry is rebuilt from
/// params.roads so mutated angles reach the road network.
Artifacts render(const params::ParameterSet& params, const params::ScenarioConfig& config = {});

enum class MutateMode { none, heuristic, llm };

std::string to_string(MutateMode mode);
MutateMode mutate_mode_from_string(std::string_view text);

/// Seed used by repair inside an LLM mutation, derived from the run seed.
std::uint64_t mutation_seed(std::uint64_t seed);

mutation::MutationResult run_mutation(MutateMode mode, const Concrete& concrete,
                                      const logical::LogicalScenario& scenario,
                                      const mutation::DangerFactors& factors,
                                      const llm::Gateway* gateway,
                                      const llm::ProviderConfig& provider, std::uint64_t seed,
                                      const params::ScenarioConfig& config = {});

/// Everything needed to replay a CLI build.
struct RunManifest {
  std::optional<std::string> description;
  std::optional<logical::FunctionalSpec> spec;
  logical::Reduction reduction = logical::Reduction::pattern;
  std::uint64_t seed = 0;
  std::string out_dir;
  std::optional<int> class_index;  // nullopt: every class
  GeometryInput geometry;
  MutateMode mutate = MutateMode::none;
  std::string factors;
  std::vector<std::string> targets;  // empty: every target
  std::uint64_t raw_cap = logical::kDefaultRawCap;

  void validate() const;
};

nlohmann::json to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const nlohmann::json& j);

struct BuildOutput {
  int class_index = 0;
  logical::PatternClass cls;
  params::ParameterSet params;
  std::optional<mutation::MutationResult> mutation;
  Artifacts artifacts;
  std::vector<std::string> files;
};

/// Runs a manifest end to end and writes the artifacts under out_dir (one
/// class_<k> subdirectory per class when every class is built). The gateway
/// is needed only for a description input or LLM mutation.
std::vector<BuildOutput> run_build(const RunManifest& manifest, const llm::Gateway* gateway,
                                   const llm::ProviderConfig& provider,
                                   const params::ScenarioConfig& config = {});

/// Byte-exact file write through a temporary and rename.
void write_file_atomic(const std::string& path, std::string_view content);
std::string read_file(const std::string& path);

}  // namespace scegen::pipeline
