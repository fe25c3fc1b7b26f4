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

#include "scegen/violation.hpp"

namespace scegen {

enum class DocumentKind { opendrive, openscenario };

/// Emitted XML plus the structural findings recorded when it was produced.
struct ScenarioDocument {
  DocumentKind kind = DocumentKind::opendrive;
  std::string text;
  std::vector<Violation> report;
};

}  // namespace scegen
