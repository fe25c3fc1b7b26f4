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

#include <string>
#include <vector>

#include <json.hpp>

namespace scegen {

/// One broken constraint, located by a field path such as `cars[2].init_speed`.
struct Violation {
  std::string path;
  std::string rule;
  std::string observed;
  std::string bounds;
  bool repairable = true;

  bool operator==(const Violation&) const = default;
};

nlohmann::json to_json(const Violation& v);
nlohmann::json to_json(const std::vector<Violation>& vs);

}  // namespace scegen
