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

#include "scegen/service.hpp"

#include <chrono>
#include <ctime>
#include <regex>

#include "scegen/error.hpp"
#include "scegen/logical.hpp"
#include "scegen/mutation.hpp"
#include "scegen/parsing.hpp"
#include "scegen/pipeline.hpp"

namespace scegen::service {

using nlohmann::json;

std::string to_string(Stage stage) {
  switch (stage) {
    case Stage::parsed: return "parsed";
    case Stage::enumerated: return "enumerated";
    case Stage::selected: return "selected";
    case Stage::concretized: return "concretized";
    case Stage::mutated: return "mutated";
  }
  return "parsed";
}

Stage stage_from_string(std::string_view text) {
  for (auto s : {Stage::parsed, Stage::enumerated, Stage::selected, Stage::concretized,
                 Stage::mutated}) {
    if (to_string(s) == text) return s;
  }
  throw DomainError("unknown stage '" + std::string(text) + "'");
}

namespace {

/// Thrown inside handlers; turned into the error envelope by Service::handle.
struct HttpError {
  int status;
  std::string code;
  std::string message;
  json details = json::object();
};

Response json_response(int status, const json& body) {
  return {status, "application/json", body.dump(), {}};
}

Response error_response(const HttpError& e) {
  return json_response(e.status,
                       {{"code", e.code}, {"message", e.message}, {"details", e.details}});
}

HttpError not_found(const std::string& what) { return {404, "not_found", what}; }

HttpError stage_conflict(Stage have, Stage need) {
  return {409, "stage_conflict",
          "session is at stage " + to_string(have) + ", needs " + to_string(need),
          {{"stage", to_string(have)}, {"required", to_string(need)}}};
}

json parse_body(const Request& req, bool allow_empty = true) {
  if (req.body.empty() || req.body.find_first_not_of(" \t\r\n") == std::string::npos) {
    if (allow_empty) return json::object();
    throw HttpError{400, "bad_request", "request body is required"};
  }
  try {
    auto j = json::parse(req.body);
    if (!j.is_object()) throw HttpError{400, "bad_request", "request body must be a JSON object"};
    return j;
  } catch (const json::parse_error& e) {
    throw HttpError{400, "bad_request", std::string("malformed JSON: ") + e.what()};
  }
}

Stage stage_of(const json& session) { return stage_from_string(session.at("stage").get<std::string>()); }

void require_stage(const json& session, Stage need) {
  const auto have = stage_of(session);
  if (have < need) throw stage_conflict(have, need);
}

std::string now_iso8601() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json documents_json(const pipeline::Artifacts& a) {
  return {{"xodr", a.xodr}, {"xosc", a.xosc}, {"params", a.params_json}};
}

json gateway_details(const GatewayError& e) {
  return {{"kind", to_string(e.kind())}, {"raw_responses", e.raw_responses()}};
}

mutation::DangerFactors factors_for(const json& session, const json& body) {
  auto factors = mutation::danger_factors_from_json(session.at("factors"));
  if (body.contains("factors") && !body.at("factors").is_null()) {
    const auto& f = body.at("factors");
    if (f.is_string()) {
      factors.description = f.get<std::string>();
    } else if (f.is_object()) {
      json merged = mutation::to_json(factors);
      for (const auto& [k, v] : f.items()) merged[k] = v;
      factors = mutation::danger_factors_from_json(merged);
    } else {
      throw HttpError{400, "bad_request", "factors must be a string or an object"};
    }
  }
  return factors;
}

}  // namespace

Service::Service(ServiceOptions options, std::shared_ptr<const llm::Gateway> gateway)
    : options_(std::move(options)), gateway_(std::move(gateway)), store_(options_.store_dir) {}

Response Service::handle(const Request& request) {
  try {
    return route(request);
  } catch (const HttpError& e) {
    return error_response(e);
  } catch (const json::exception& e) {
    return error_response({400, "bad_request", std::string("bad field: ") + e.what()});
  } catch (const Error& e) {
    return error_response({422, "unprocessable", e.what()});
  } catch (const std::exception& e) {
    return error_response({500, "internal", e.what()});
  }
}

Response Service::route(const Request& req) {
  static const std::regex kSession(R"(^/v1/sessions/([^/]+)(?:/([a-z]+))?(?:/([^/]+))?(?:/([a-z]+))?/?$)");
  if (req.path == "/v1/health") return json_response(200, {{"status", "ok"}});
  if (req.path == "/v1/sessions" || req.path == "/v1/sessions/") {
    if (req.method != "POST") throw HttpError{405, "method_not_allowed", "use POST"};
    return create_session(req);
  }
  std::smatch m;
  if (!std::regex_match(req.path, m, kSession)) throw not_found("no route for " + req.path);
  const std::string id = m[1];
  const std::string action = m[2];
  const std::string arg = m[3];
  const std::string tail = m[4];
  if (!store_.exists(id)) throw not_found("unknown session " + id);

  const auto lock = store_.lock_for(id);
  std::lock_guard guard(*lock);
  const auto allow = [&](const char* method) {
    if (req.method != method) {
      throw HttpError{405, "method_not_allowed", std::string("use ") + method};
    }
  };
  if (action.empty()) { allow("GET"); return get_session(id); }
  if (action == "enumerate" && arg.empty()) { allow("POST"); return enumerate(id, req); }
  if (action == "select" && arg.empty()) { allow("POST"); return select(id, req); }
  if (action == "mutate" && arg.empty()) { allow("POST"); return mutate(id, req); }
  if (action == "params" && arg.empty()) {
    if (req.method == "GET") return file(id, "params", req);
    allow("PUT");
    return edit_params(id, req);
  }
  if (action == "geometry" && arg.empty()) { allow("GET"); return geometry(id); }
  if (action == "classes" && tail == "svg") { allow("GET"); return diagram(id, arg); }
  if (action == "files" && !arg.empty() && tail.empty()) { allow("GET"); return file(id, arg, req); }
  throw not_found("no route for " + req.path);
}

Response Service::create_session(const Request& req) {
  const auto body = parse_body(req, false);
  json session = {{"id", SessionStore::new_id()}, {"created_at", now_iso8601()},
                  {"stage", to_string(Stage::parsed)}};

  if (body.contains("spec")) {
    // Direct functional spec, bypassing stage 1.
    logical::FunctionalSpec spec;
    try {
      spec = logical::functional_spec_from_json(body.at("spec"));
      spec.validate();
    } catch (const Error& e) {
      throw HttpError{422, "invalid_spec", e.what()};
    }
    mutation::DangerFactors factors;
    factors.description = body.value("description", "");
    session["description"] = factors.description;
    session["spec"] = logical::to_json(spec);
    session["factors"] = mutation::to_json(factors);
    session["unsupported"] = json::array();
  } else {
    if (!body.contains("description") || !body.at("description").is_string()) {
      throw HttpError{400, "bad_request", "description (string) is required"};
    }
    const auto description = body.at("description").get<std::string>();
    if (description.find_first_not_of(" \t\r\n") == std::string::npos) {
      throw HttpError{400, "bad_request", "description is empty"};
    }
    if (!gateway_) throw HttpError{502, "gateway_unavailable", "no LLM gateway is configured"};
    parsing::ParseOutcome outcome;
    try {
      outcome = parsing::parse_description(description, *gateway_, options_.provider);
    } catch (const ParseError& e) {
      throw HttpError{422, "parse_failed", e.what(), {{"raw", e.raw()}}};
    } catch (const GatewayError& e) {
      if (e.kind() == GatewayError::Kind::schema || e.kind() == GatewayError::Kind::fixture) {
        throw HttpError{422, "parse_failed", e.what(), gateway_details(e)};
      }
      throw HttpError{502, "gateway_error", e.what(), gateway_details(e)};
    }
    session["description"] = description;
    session["spec"] = logical::to_json(outcome.functional);
    session["factors"] = mutation::to_json(outcome.danger);
    session["unsupported"] = outcome.unsupported;
    session["defaulted"] = outcome.defaulted;
    session["summary"] = outcome.summary;
  }
  const std::string id = session.at("id");
  store_.save(id, session);
  return json_response(201, {{"session_id", id},
                             {"stage", session.at("stage")},
                             {"spec", session.at("spec")},
                             {"factors", session.at("factors")},
                             {"unsupported", session.at("unsupported")}});
}

Response Service::get_session(const std::string& id) {
  auto session = *store_.load(id);
  json out = session;
  out.erase("documents");
  out.erase("enumeration");
  if (session.contains("enumeration")) out["classes"] = session["enumeration"]["classes"];
  return json_response(200, out);
}

Response Service::enumerate(const std::string& id, const Request& req) {
  auto session = *store_.load(id);
  const auto body = parse_body(req);
  logical::Reduction reduction;
  try {
    reduction = logical::reduction_from_string(body.value("reduction", "pattern"));
  } catch (const Error& e) {
    throw HttpError{400, "bad_request", e.what()};
  }
  const auto stage = stage_of(session);
  if (session.contains("enumeration")) {
    if (session["enumeration"]["reduction"] == logical::to_string(reduction)) {
      return json_response(200, session["enumeration"]);
    }
    if (stage > Stage::enumerated) {
      throw HttpError{409, "stage_conflict",
                      "session already selected a class under another reduction",
                      {{"stage", to_string(stage)}}};
    }
  }
  const auto spec = logical::functional_spec_from_json(session.at("spec"));
  std::vector<logical::PatternClass> classes;
  try {
    classes = logical::enumerate_classes(spec, reduction, options_.raw_cap);
  } catch (const CapacityError& e) {
    throw HttpError{409, "capacity_exceeded", e.what(),
                    {{"requested", e.requested()}, {"cap", e.cap()}}};
  }
  auto list = json::array();
  for (const auto& c : classes) list.push_back(logical::to_json(c));
  json payload = {{"reduction", logical::to_string(reduction)},
                  {"raw_count", logical::raw_scenario_count(spec)},
                  {"classes", list}};
  session["enumeration"] = payload;
  if (stage < Stage::enumerated) session["stage"] = to_string(Stage::enumerated);
  store_.save(id, session);
  return json_response(200, payload);
}

Response Service::select(const std::string& id, const Request& req) {
  auto session = *store_.load(id);
  require_stage(session, Stage::enumerated);
  const auto body = parse_body(req);
  if (!body.contains("class_index") || !body.at("class_index").is_number_integer()) {
    throw HttpError{400, "bad_request", "class_index (integer) is required"};
  }
  json selection = {{"class_index", body.at("class_index")},
                    {"seed", body.value("seed", std::uint64_t{0})},
                    {"geometry", pipeline::to_json(pipeline::geometry_input_from_json(body))}};
  if (session.contains("selection") && session["selection"] == selection) {
    return json_response(200, session["select_response"]);
  }
  if (stage_of(session) == Stage::mutated) {
    throw HttpError{409, "stage_conflict", "session is already mutated; start a new session",
                    {{"stage", "mutated"}}};
  }
  const auto& classes = session["enumeration"]["classes"];
  const int k = body.at("class_index").get<int>();
  if (k < 0 || k >= static_cast<int>(classes.size())) {
    throw not_found("class_index " + std::to_string(k) + " outside [0, " +
                    std::to_string(classes.size()) + ")");
  }
  const auto scenario = logical::scenario_from_json(classes[k].at("representative"));
  const auto seed = selection["seed"].get<std::uint64_t>();
  pipeline::Concrete concrete;
  try {
    concrete = pipeline::concretize_scenario(
        scenario, pipeline::geometry_input_from_json(selection["geometry"]), seed,
        options_.scenario);
  } catch (const ValidationError& e) {
    throw HttpError{422, "invalid_geometry", e.what()};
  }
  const auto artifacts = pipeline::render(concrete.params, options_.scenario);
  json response = {{"stage", to_string(Stage::concretized)},
                   {"class_index", k},
                   {"params", params::to_json(concrete.params)},
                   {"geometry", road::geometry_json(concrete.geometry)}};
  session["selection"] = selection;
  session["select_response"] = response;
  session["params"] = params::to_json(concrete.params);
  session["documents"] = {{"original", documents_json(artifacts)}};
  session.erase("mutation");
  session["stage"] = to_string(Stage::concretized);
  store_.save(id, session);
  return json_response(200, response);
}

Response Service::mutate(const std::string& id, const Request& req) {
  auto session = *store_.load(id);
  require_stage(session, Stage::concretized);
  const auto body = parse_body(req);
  pipeline::MutateMode mode;
  try {
    mode = pipeline::mutate_mode_from_string(body.value("mode", "heuristic"));
  } catch (const Error& e) {
    throw HttpError{400, "bad_request", e.what()};
  }
  if (mode == pipeline::MutateMode::none) throw HttpError{400, "bad_request", "mode must be llm or heuristic"};
  mutation::DangerFactors factors;
  try {
    factors = factors_for(session, body);
  } catch (const DomainError& e) {
    throw HttpError{400, "bad_request", e.what()};
  }

  const auto& selection = session.at("selection");
  const auto k = selection.at("class_index").get<int>();
  const auto scenario =
      logical::scenario_from_json(session["enumeration"]["classes"][k].at("representative"));
  pipeline::Concrete concrete;
  concrete.params = params::params_from_json(session.at("params"));
  concrete.geometry = road::build_geometry(
      concrete.params.roads, {road::kDefaultJunctionRadius, options_.scenario.min_separation});
  if (mode == pipeline::MutateMode::llm && !gateway_) {
    throw HttpError{502, "gateway_unavailable", "no LLM gateway is configured"};
  }

  mutation::MutationResult result;
  try {
    result = pipeline::run_mutation(mode, concrete, scenario, factors, gateway_.get(),
                                    options_.provider, selection.at("seed").get<std::uint64_t>(),
                                    options_.scenario);
  } catch (const MutatorError& e) {
    throw HttpError{502, "mutator_failed", e.what(), {{"raw", e.raw()}}};
  } catch (const GatewayError& e) {
    throw HttpError{502, "gateway_error", e.what(), gateway_details(e)};
  } catch (const ContractError& e) {
    throw HttpError{422, "contract_violation", e.what()};
  }
  const auto artifacts = pipeline::render(result.params, options_.scenario);
  json response = mutation::to_json(result);
  response["mode"] = pipeline::to_string(mode);
  response["stage"] = to_string(Stage::mutated);
  session["mutation"] = {{"mode", pipeline::to_string(mode)},
                         {"factors", mutation::to_json(factors)},
                         {"result", mutation::to_json(result)}};
  session["documents"]["mutated"] = documents_json(artifacts);
  session["stage"] = to_string(Stage::mutated);
  store_.save(id, session);
  return json_response(200, response);
}

Response Service::edit_params(const std::string& id, const Request& req) {
  auto session = *store_.load(id);
  require_stage(session, Stage::concretized);
  const auto body = parse_body(req, false);
  const std::string variant = req.query.count("variant") ? req.query.at("variant") : "original";
  if (variant != "original" && variant != "mutated") throw not_found("unknown variant " + variant);
  if (variant == "mutated") require_stage(session, Stage::mutated);

  params::ParameterSet edited;
  try {
    edited = params::params_from_json(body.contains("params") ? body.at("params") : body);
  } catch (const std::exception& e) {
    throw HttpError{400, "bad_request", std::string("params: ") + e.what()};
  }
  const auto current = params::params_from_json(
      variant == "original" ? session.at("params") : session["mutation"]["result"]["params"]);
  const auto geometry = road::build_geometry(
      current.roads, {road::kDefaultJunctionRadius, options_.scenario.min_separation});
  const auto violations = params::validate_params(edited, geometry, options_.scenario);
  if (!violations.empty()) {
    auto list = json::array();
    for (const auto& v : violations) list.push_back(to_json(v));
    throw HttpError{422, "invalid_params", "edited parameters violate " +
                                               std::to_string(violations.size()) + " rule(s)",
                    {{"violations", list}}};
  }
  const auto artifacts = pipeline::render(edited, options_.scenario);
  if (variant == "original") {
    session["params"] = params::to_json(edited);
  } else {
    session["mutation"]["result"]["params"] = params::to_json(edited);
  }
  session["documents"][variant] = documents_json(artifacts);
  store_.save(id, session);
  return json_response(200, {{"variant", variant}, {"params", params::to_json(edited)},
                             {"violations", json::array()}});
}

Response Service::geometry(const std::string& id) {
  const auto session = *store_.load(id);
  require_stage(session, Stage::concretized);
  const auto p = params::params_from_json(session.at("params"));
  const auto g = road::build_geometry(p.roads, {road::kDefaultJunctionRadius,
                                                options_.scenario.min_separation});
  return json_response(200, road::geometry_json(g));
}

Response Service::diagram(const std::string& id, const std::string& index) {
  const auto session = *store_.load(id);
  require_stage(session, Stage::enumerated);
  const auto& classes = session["enumeration"]["classes"];
  int k = -1;
  try {
    k = std::stoi(index);
  } catch (const std::exception&) {
    throw not_found("bad class index " + index);
  }
  if (k < 0 || k >= static_cast<int>(classes.size())) throw not_found("class " + index);
  const auto scenario = logical::scenario_from_json(classes[k].at("representative"));
  const auto conflicts = logical::conflict_matrix(scenario, scenario.num_entries);
  return {200, "image/svg+xml", logical::render_svg(scenario, &conflicts), {}};
}

Response Service::file(const std::string& id, const std::string& kind, const Request& req) {
  const auto session = *store_.load(id);
  require_stage(session, Stage::concretized);
  const std::string variant = req.query.count("variant") ? req.query.at("variant") : "original";
  if (variant != "original" && variant != "mutated") throw not_found("unknown variant " + variant);
  if (variant == "mutated") require_stage(session, Stage::mutated);
  std::string content_type;
  std::string ext;
  if (kind == "xodr") {
    content_type = "application/xml";
    ext = "xodr";
  } else if (kind == "xosc") {
    content_type = "application/xml";
    ext = "xosc";
  } else if (kind == "params") {
    content_type = "application/json";
    ext = "json";
  } else {
    throw not_found("unknown file kind " + kind);
  }
  Response r{200, content_type, session["documents"][variant][kind].get<std::string>(), {}};
  const auto seed = session["selection"]["seed"].get<std::uint64_t>();
  r.headers["Content-Disposition"] = "attachment; filename=\"" + id.substr(0, 8) + "_s" +
                                     std::to_string(seed) + "_" + variant + "." + ext + "\"";
  return r;
}

}  // namespace scegen::service
