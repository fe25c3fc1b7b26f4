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

// Shared access to the checked-in case table and keyed mock replies.

#include <filesystem>
#include <memory>
#include <string>

#include <unistd.h>

#include <json.hpp>

#include "scegen/llm.hpp"
#include "scegen/pipeline.hpp"

namespace scegen::testing {

inline std::string fixture_path(const std::string& name) {
  return std::string(SCEGEN_FIXTURE_DIR) + "/" + name;
}

inline const nlohmann::json& case_table() {
  static const auto table = nlohmann::json::parse(pipeline::read_file(fixture_path("cases.json")));
  return table;
}

inline std::shared_ptr<llm::MockProvider> mock_provider() {
  return llm::MockProvider::from_file(fixture_path("llm_mock.json"));
}

inline std::shared_ptr<const llm::Gateway> mock_gateway() {
  return std::make_shared<const llm::Gateway>(mock_provider(), llm::builtin_schemas());
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag) {
  static int counter = 0;
  auto dir = std::filesystem::temp_directory_path() /
             ("scegen_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace scegen::testing
