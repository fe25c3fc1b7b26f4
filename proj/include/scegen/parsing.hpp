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

// Stage 1: free-form description to functional spec and danger factors.

#include <optional>
#include <string>
#include <vector>

#include "scegen/llm.hpp"
#include "scegen/logical.hpp"
#include "scegen/mutation.hpp"

namespace scegen::parsing {

inline constexpr int kDefaultCars = 2;
inline constexpr int kMinCars = 1;
inline constexpr int kMaxCars = 32;
inline constexpr int kMinEntries = 3;
inline constexpr int kMaxEntries = 12;

struct ParseOutcome {
  logical::FunctionalSpec functional;
  mutation::DangerFactors danger;
  /// Requested behaviour outside the supported action set, e.g. pedestrians.
  std::vector<std::string> unsupported;
  /// Fields filled by defaults rather than the description.
  std::vector<std::string> defaulted;
  std::string summary;
  int llm_calls = 0;
};

nlohmann::json to_json(const ParseOutcome& outcome);

/// Entry count implied by junction vocabulary ("T-junction" -> 3), or nullopt.
std::optional<int> entries_from_keywords(std::string_view description);

/// Unsupported-actor phrases found by keyword (pedestrian, cyclist, ...).
std::vector<std::string> unsupported_keywords(std::string_view description);

/// Explicit entries when given, otherwise car i starts at entry i mod n.
/// Throws ValidationError for out-of-range or mismatched entries.
std::vector<int> assign_entries(int num_cars, int num_entries,
                                const std::optional<std::vector<int>>& entries);

llm::CompletionRequest functional_request(std::string_view description);
llm::CompletionRequest danger_request(std::string_view description);

/// Two structured completions: one for the functional spec, one for the danger
/// factors. Throws ParseError for empty text or out-of-range counts.
ParseOutcome parse_description(std::string_view description, const llm::Gateway& gateway,
                               const llm::ProviderConfig& config);

}  // namespace scegen::parsing
