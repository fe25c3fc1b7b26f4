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

#include "scegen/parsing.hpp"

#include <algorithm>
#include <cctype>

#include "scegen/error.hpp"

namespace scegen::parsing {

using nlohmann::json;

namespace {

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool contains_word(const std::string& haystack, std::string_view needle) {
  return haystack.find(needle) != std::string::npos;
}

bool blank(std::string_view text) {
  return std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

json to_json(const ParseOutcome& o) {
  return {{"functional", logical::to_json(o.functional)},
          {"danger", mutation::to_json(o.danger)},
          {"unsupported", o.unsupported},
          {"defaulted", o.defaulted},
          {"summary", o.summary},
          {"llm_calls", o.llm_calls}};
}

std::optional<int> entries_from_keywords(std::string_view description) {
  const auto text = lower(description);
  for (std::string_view k : {"t-junction", "t junction", "t-intersection", "t intersection",
                             "y-junction", "y junction", "y-intersection", "y intersection",
                             "three-way", "three way", "3-way"}) {
    if (contains_word(text, k)) return 3;
  }
  for (std::string_view k : {"roundabout", "four-way", "four way", "4-way", "crossroad",
                             "intersection", "junction"}) {
    if (contains_word(text, k)) return 4;
  }
  return std::nullopt;
}

std::vector<std::string> unsupported_keywords(std::string_view description) {
  const auto text = lower(description);
  std::vector<std::string> out;
  const std::pair<std::string_view, std::string_view> table[] = {
      {"pedestrian", "pedestrian"}, {"crosswalk", "crosswalk"}, {"zebra crossing", "crosswalk"},
      {"cyclist", "cyclist"},       {"bicycle", "bicycle"},     {"traffic light", "traffic light"},
  };
  for (const auto& [needle, label] : table) {
    if (contains_word(text, needle) &&
        std::find(out.begin(), out.end(), label) == out.end()) {
      out.emplace_back(label);
    }
  }
  return out;
}

std::vector<int> assign_entries(int num_cars, int num_entries,
                                const std::optional<std::vector<int>>& entries) {
  if (num_cars < 1) throw ValidationError("at least one car is required");
  if (num_entries < kMinEntries) throw ValidationError("a junction needs at least 3 entries");
  if (entries) {
    if (static_cast<int>(entries->size()) != num_cars) {
      throw ValidationError("entries lists " + std::to_string(entries->size()) +
                            " cars but num_cars is " + std::to_string(num_cars));
    }
    for (int e : *entries) {
      if (e < 0 || e >= num_entries) {
        throw ValidationError("entry " + std::to_string(e) + " is outside [0, " +
                              std::to_string(num_entries - 1) + "]");
      }
    }
    return *entries;
  }
  std::vector<int> out(static_cast<std::size_t>(num_cars));
  for (int i = 0; i < num_cars; ++i) out[static_cast<std::size_t>(i)] = i % num_entries;
  return out;
}

llm::CompletionRequest functional_request(std::string_view description) {
  const auto schemas = llm::builtin_schemas();
  return {std::string(llm::prompt_template("system_v1")),
          llm::render_template(llm::prompt_template("functional_v1"),
                               {{"schema", schemas.find("functional")->description},
                                {"description", std::string(description)}}),
          "functional"};
}

llm::CompletionRequest danger_request(std::string_view description) {
  const auto schemas = llm::builtin_schemas();
  return {std::string(llm::prompt_template("system_v1")),
          llm::render_template(llm::prompt_template("danger_v1"),
                               {{"schema", schemas.find("danger")->description},
                                {"description", std::string(description)}}),
          "danger"};
}

ParseOutcome parse_description(std::string_view description, const llm::Gateway& gateway,
                               const llm::ProviderConfig& config) {
  if (blank(description)) throw ParseError("description is empty");

  ParseOutcome out;
  const auto functional = gateway.complete_structured(functional_request(description), config);
  const auto danger = gateway.complete_structured(danger_request(description), config);
  out.llm_calls = 2;
  const auto& f = functional.parsed;

  int num_cars = kDefaultCars;
  if (f.contains("num_cars") && !f.at("num_cars").is_null()) {
    num_cars = f.at("num_cars").get<int>();
  } else {
    out.defaulted.push_back("num_cars");
  }
  if (num_cars < kMinCars || num_cars > kMaxCars) {
    throw ParseError("num_cars " + std::to_string(num_cars) + " is outside [1, 32]", functional.raw);
  }

  int num_entries = 4;
  if (f.contains("num_entries") && !f.at("num_entries").is_null()) {
    num_entries = f.at("num_entries").get<int>();
  } else {
    num_entries = entries_from_keywords(description).value_or(4);
    out.defaulted.push_back("num_entries");
  }
  if (num_entries < kMinEntries || num_entries > kMaxEntries) {
    throw ParseError("num_entries " + std::to_string(num_entries) + " is outside [3, 12]",
                     functional.raw);
  }

  std::optional<std::vector<int>> entries;
  if (f.contains("entries") && !f.at("entries").is_null()) {
    entries = f.at("entries").get<std::vector<int>>();
  } else {
    out.defaulted.push_back("entries");
  }
  try {
    out.functional = logical::FunctionalSpec::from_entries(
        num_entries, assign_entries(num_cars, num_entries, entries));
  } catch (const ValidationError& e) {
    throw ParseError(e.what(), functional.raw);
  }

  if (f.contains("unsupported")) {
    for (const auto& u : f.at("unsupported")) out.unsupported.push_back(u.get<std::string>());
  }
  for (auto& k : unsupported_keywords(description)) {
    const auto covered = std::any_of(out.unsupported.begin(), out.unsupported.end(),
                                     [&](const std::string& u) { return contains_word(lower(u), k); });
    if (!covered) out.unsupported.push_back(std::move(k));
  }

  const auto& d = danger.parsed;
  out.danger.description = std::string(description);
  out.danger.targets.clear();
  for (const auto& t : d.value("danger_targets", json::array())) {
    if (!t.is_string()) continue;
    if (const auto parsed = mutation::danger_target_from_string(t.get<std::string>())) {
      out.danger.targets.insert(*parsed);
    }
  }
  if (out.danger.targets.empty()) {
    out.danger.targets = {mutation::DangerTarget::angle, mutation::DangerTarget::init_speed,
                          mutation::DangerTarget::change_lane};
    out.defaulted.push_back("danger_targets");
  }
  out.danger.intensity = std::clamp(d.value("intensity", 0.5), 0.0, 1.0);
  out.summary = d.value("summary", "");
  return out;
}

}  // namespace scegen::parsing
