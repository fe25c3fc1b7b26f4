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

// Expands the readable case table (tests/fixtures/cases.json) into the keyed
// mock-provider fixture file. Overlay keys depend on the concretized
// parameters, so the fixture build is replayed through the real pipeline.
//
//   scegen_fixtures <cases.json> <llm_mock.json>

#include <iostream>

#include <json.hpp>

#include "scegen/error.hpp"
#include "scegen/llm.hpp"
#include "scegen/mutation.hpp"
#include "scegen/parsing.hpp"
#include "scegen/pipeline.hpp"

using nlohmann::json;

namespace {

std::vector<std::string> replies(const json& list) {
  std::vector<std::string> out;
  for (const auto& r : list) out.push_back(r.is_string() ? r.get<std::string>() : r.dump());
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: scegen_fixtures <cases.json> <llm_mock.json>\n";
    return 2;
  }
  try {
    scegen::llm::forbid_network(true);
    const auto table = json::parse(scegen::pipeline::read_file(argv[1]));
    const auto& build = table.at("build");
    const auto geometry = scegen::pipeline::geometry_input_from_json(build.at("geometry"));
    const auto reduction = scegen::logical::reduction_from_string(build.at("reduction").get<std::string>());
    const auto seed = build.at("seed").get<std::uint64_t>();
    const auto class_index = build.at("class").get<std::size_t>();
    const scegen::llm::ProviderConfig provider;

    auto entries = json::array();
    for (const auto& c : table.at("cases")) {
      const auto name = c.at("case").get<std::string>();
      const auto description = c.at("description").get<std::string>();

      auto mock = std::make_shared<scegen::llm::MockProvider>();
      const auto f_req = scegen::parsing::functional_request(description);
      const auto d_req = scegen::parsing::danger_request(description);
      mock->add(f_req, replies(c.at("functional")));
      mock->add(d_req, replies(c.at("danger")));
      entries.push_back({{"key", scegen::llm::request_key(f_req)}, {"note", name + " functional"},
                         {"responses", replies(c.at("functional"))}});
      entries.push_back({{"key", scegen::llm::request_key(d_req)}, {"note", name + " danger"},
                         {"responses", replies(c.at("danger"))}});

      const scegen::llm::Gateway gateway(mock, scegen::llm::builtin_schemas());
      const auto parsed = scegen::parsing::parse_description(description, gateway, provider);
      const auto classes = scegen::logical::enumerate_classes(parsed.functional, reduction);
      const auto& scenario = classes.at(class_index).representative;
      const auto concrete = scegen::pipeline::concretize_scenario(scenario, geometry, seed);
      const auto o_req = scegen::mutation::mutation_request(concrete.params, parsed.danger);
      entries.push_back({{"key", scegen::llm::request_key(o_req)}, {"note", name + " overlay"},
                         {"responses", replies(c.at("overlay"))}});
    }
    scegen::pipeline::write_file_atomic(argv[2], json{{"entries", entries}}.dump(2) + "\n");
    std::cout << "wrote " << entries.size() << " fixture entries to " << argv[2] << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
