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

// scegen: headless driver for parse -> enumerate -> build, plus the HTTP service.
//
// Exit codes: 0 success, 1 domain error (bad spec, capacity, gateway, ...),
// 2 usage error (missing or malformed arguments).

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "scegen/error.hpp"
#include "scegen/http_server.hpp"
#include "scegen/llm.hpp"
#include "scegen/logical.hpp"
#include "scegen/parsing.hpp"
#include "scegen/pipeline.hpp"
#include "scegen/service.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GatewayFlags {
  std::string mock_file;
  std::string base_url;
  std::string model;
  int max_retries = 3;

  void add_to(CLI::App& app) {
    app.add_option("--mock-llm", mock_file, "Replay LLM replies from a fixture file")
        ->envname("SCEGEN_MOCK_LLM");
    app.add_option("--llm-base-url", base_url, "OpenAI-compatible API root")
        ->envname("SCEGEN_LLM_BASE_URL");
    app.add_option("--llm-model", model, "Model id")->envname("SCEGEN_LLM_MODEL");
    app.add_option("--llm-retries", max_retries, "Corrective retries per request")
        ->check(CLI::Range(0, 10));
  }

  scegen::llm::ProviderConfig config() const {
    scegen::llm::ProviderConfig cfg;
    if (!base_url.empty()) cfg.base_url = base_url;
    if (!model.empty()) cfg.model_name = model;
    cfg.max_retries = max_retries;
    cfg.validate();
    return cfg;
  }

  bool live_configured() const {
    return std::getenv(scegen::llm::ProviderConfig{}.api_key_env.c_str()) != nullptr;
  }

  std::shared_ptr<scegen::llm::Gateway> gateway() const {
    std::shared_ptr<scegen::llm::ChatProvider> provider;
    if (!mock_file.empty()) {
      scegen::llm::forbid_network(true);
      provider = scegen::llm::MockProvider::from_file(mock_file);
    } else {
      provider = std::make_shared<scegen::llm::HttpProvider>();
    }
    return std::make_shared<scegen::llm::Gateway>(provider, scegen::llm::builtin_schemas());
  }
};

std::vector<int> parse_int_list(const std::string& text, const char* what) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(std::string(what) + ": '" + item + "' is not an integer");
    }
  }
  if (out.empty()) throw UsageError(std::string(what) + " is empty");
  return out;
}

std::vector<double> parse_double_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw UsageError(std::string(what) + ": '" + item + "' is not a number");
    }
  }
  return out;
}

/// "2:1" (left:right) for every leg, or a comma list of such pairs.
std::vector<scegen::pipeline::LaneCounts> parse_lanes(const std::string& text) {
  std::vector<scegen::pipeline::LaneCounts> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    try {
      if (colon == std::string::npos) {
        const int n = std::stoi(item);
        out.push_back({n, n});
      } else {
        out.push_back({std::stoi(item.substr(0, colon)), std::stoi(item.substr(colon + 1))});
      }
    } catch (const std::exception&) {
      throw UsageError("--lanes: '" + item + "' is not LEFT:RIGHT");
    }
  }
  return out;
}

std::string text_or_file(const std::string& arg) {
  std::error_code ec;
  if (fs::is_regular_file(arg, ec)) return scegen::pipeline::read_file(arg);
  return arg;
}

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scenario generator for uncontrolled intersections"};
  app.require_subcommand(1);
  bool json_out = false;
  app.add_flag("--json", json_out, "Machine-readable JSON output");

  // parse
  auto* parse_cmd = app.add_subcommand("parse", "Extract a functional spec from a description");
  std::string parse_input;
  GatewayFlags parse_gw;
  parse_cmd->add_option("input", parse_input, "Description text or a file holding it")->required();
  parse_gw.add_to(*parse_cmd);

  // enumerate
  auto* enum_cmd = app.add_subcommand("enumerate", "List logical scenario classes");
  int enum_entries = 0;
  std::string enum_cars;
  std::string enum_reduction = "pattern";
  std::string enum_svg;
  std::uint64_t enum_cap = scegen::logical::kDefaultRawCap;
  enum_cmd->add_option("--entries", enum_entries, "Number of junction legs")->required();
  enum_cmd->add_option("--cars", enum_cars, "Entry of each car, e.g. 0,1,2")->required();
  enum_cmd->add_option("--reduction", enum_reduction, "pattern or orbit")
      ->check(CLI::IsMember({"pattern", "orbit"}));
  enum_cmd->add_option("--svg", enum_svg, "Write one diagram per class into this directory");
  enum_cmd->add_option("--raw-cap", enum_cap, "Refuse to enumerate more raw scenarios")
      ->envname("SCEGEN_RAW_CAP");

  // build
  auto* build_cmd = app.add_subcommand("build", "Concretize classes into OpenDRIVE/OpenSCENARIO");
  std::string manifest_in, manifest_out, b_class = "0", b_out, b_desc, b_cars, b_reduction = "pattern";
  std::string b_mutate = "none", b_factors, b_targets, b_angles, b_lanes;
  int b_entries = 0;
  std::uint64_t b_seed = 0;
  std::uint64_t b_cap = scegen::logical::kDefaultRawCap;
  double b_road_len = scegen::road::kDefaultRoadLength;
  GatewayFlags build_gw;
  build_cmd->add_option("--manifest", manifest_in, "Replay a saved run manifest");
  build_cmd->add_option("--save-manifest", manifest_out, "Write the run manifest here");
  build_cmd->add_option("--class", b_class, "Class index or 'all'");
  build_cmd->add_option("--seed", b_seed, "Sampling seed");
  build_cmd->add_option("--out", b_out, "Output directory");
  build_cmd->add_option("--description", b_desc, "Description text or file (needs an LLM)");
  build_cmd->add_option("--entries", b_entries, "Number of junction legs");
  build_cmd->add_option("--cars", b_cars, "Entry of each car, e.g. 0,1,2");
  build_cmd->add_option("--reduction", b_reduction, "pattern or orbit")
      ->check(CLI::IsMember({"pattern", "orbit"}));
  build_cmd->add_option("--mutate", b_mutate, "none, heuristic or llm")
      ->check(CLI::IsMember({"none", "heuristic", "llm"}));
  build_cmd->add_option("--factors", b_factors, "Danger description for LLM mutation");
  build_cmd->add_option("--targets", b_targets, "Subset of angle,init_speed,change_lane");
  build_cmd->add_option("--angles", b_angles, "Leg angles in degrees, each relative to the previous leg");
  build_cmd->add_option("--lanes", b_lanes, "LEFT:RIGHT lane counts, once or per leg");
  build_cmd->add_option("--road-len", b_road_len, "Leg length in metres");
  build_cmd->add_option("--raw-cap", b_cap, "Refuse to enumerate more raw scenarios")
      ->envname("SCEGEN_RAW_CAP");
  build_gw.add_to(*build_cmd);

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP API");
  scegen::service::ServerOptions server_opts;
  scegen::service::ServiceOptions service_opts;
  GatewayFlags serve_gw;
  serve_cmd->add_option("--port", server_opts.port, "Listen port")->envname("SCEGEN_PORT");
  serve_cmd->add_option("--host", server_opts.host, "Listen address")->envname("SCEGEN_HOST");
  serve_cmd->add_option("--store-dir", service_opts.store_dir, "Session store directory")
      ->envname("SCEGEN_STORE_DIR");
  serve_cmd->add_option("--ui-dir", server_opts.ui_dir, "Static UI bundle to serve at /")
      ->envname("SCEGEN_UI_DIR");
  serve_cmd->add_option("--raw-cap", service_opts.raw_cap, "Raw enumeration cap")
      ->envname("SCEGEN_RAW_CAP");
  serve_gw.add_to(*serve_cmd);

  // llm-key
  auto* key_cmd = app.add_subcommand("llm-key", "Print the fixture key of a stage-1 request");
  std::string key_schema = "functional", key_input;
  key_cmd->add_option("--schema", key_schema, "functional or danger")
      ->check(CLI::IsMember({"functional", "danger"}));
  key_cmd->add_option("input", key_input, "Description text or file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*parse_cmd) {
      const auto text = text_or_file(parse_input);
      const auto gateway = parse_gw.gateway();
      const auto outcome = scegen::parsing::parse_description(text, *gateway, parse_gw.config());
      if (json_out) {
        print_json(scegen::parsing::to_json(outcome));
      } else {
        const auto& f = outcome.functional;
        std::cout << "cars: " << f.cars.size() << "\n"
                  << "entries: " << f.num_entries << "\n"
                  << "positions: [" << join(f.entries()) << "]\n";
        std::string targets;
        for (auto t : outcome.danger.targets) {
          targets += (targets.empty() ? "" : ", ") + scegen::mutation::to_string(t);
        }
        std::cout << "danger targets: " << targets << "\n";
        for (const auto& u : outcome.unsupported) std::cout << "unsupported: " << u << "\n";
      }
      return kExitOk;
    }

    if (*enum_cmd) {
      const auto spec = scegen::logical::FunctionalSpec::from_entries(
          enum_entries, parse_int_list(enum_cars, "--cars"));
      spec.validate();
      const auto mode = scegen::logical::reduction_from_string(enum_reduction);
      const auto classes = scegen::logical::enumerate_classes(spec, mode, enum_cap);
      if (!enum_svg.empty()) {
        for (std::size_t k = 0; k < classes.size(); ++k) {
          const auto& rep = classes[k].representative;
          const auto conflicts = scegen::logical::conflict_matrix(rep, rep.num_entries);
          scegen::pipeline::write_file_atomic(
              (fs::path(enum_svg) / ("class_" + std::to_string(k) + ".svg")).string(),
              scegen::logical::render_svg(rep, &conflicts));
        }
      }
      if (json_out) {
        auto list = json::array();
        for (const auto& c : classes) list.push_back(scegen::logical::to_json(c));
        print_json({{"reduction", enum_reduction},
                    {"raw_count", scegen::logical::raw_scenario_count(spec)},
                    {"classes", list}});
      } else {
        std::cout << "raw scenarios: " << scegen::logical::raw_scenario_count(spec) << ", "
                  << enum_reduction << " classes: " << classes.size() << "\n";
        for (std::size_t k = 0; k < classes.size(); ++k) {
          const auto& c = classes[k];
          std::cout << k << "  " << scegen::logical::pattern_label(c.pattern)
                    << "  members=" << c.members
                    << "  directions=[" << join(c.representative.directions()) << "]\n";
        }
      }
      return kExitOk;
    }

    if (*build_cmd) {
      scegen::pipeline::RunManifest m;
      if (!manifest_in.empty()) {
        m = scegen::pipeline::manifest_from_json(
            json::parse(scegen::pipeline::read_file(manifest_in)));
        // Replays may be redirected; everything else comes from the manifest.
        if (!b_out.empty()) m.out_dir = b_out;
      } else {
        const bool have_spec = b_entries > 0 || !b_cars.empty();
        if (have_spec == !b_desc.empty()) {
          throw UsageError("give either --entries/--cars or --description");
        }
        if (have_spec) {
          if (b_entries <= 0 || b_cars.empty()) throw UsageError("--entries and --cars go together");
          m.spec = scegen::logical::FunctionalSpec::from_entries(
              b_entries, parse_int_list(b_cars, "--cars"));
        } else {
          m.description = text_or_file(b_desc);
        }
        if (b_out.empty()) throw UsageError("--out is required");
        m.out_dir = b_out;
        m.seed = b_seed;
        m.reduction = scegen::logical::reduction_from_string(b_reduction);
        if (b_class != "all") m.class_index = parse_int_list(b_class, "--class").at(0);
        m.mutate = scegen::pipeline::mutate_mode_from_string(b_mutate);
        m.factors = b_factors;
        if (!b_targets.empty()) {
          std::stringstream ss(b_targets);
          std::string t;
          while (std::getline(ss, t, ',')) m.targets.push_back(t);
        }
        if (!b_angles.empty()) m.geometry.angles_deg = parse_double_list(b_angles, "--angles");
        if (!b_lanes.empty()) m.geometry.lanes = parse_lanes(b_lanes);
        m.geometry.road_len = b_road_len;
        m.raw_cap = b_cap;
        m.validate();
      }
      const bool needs_llm = m.description.has_value() || m.mutate == scegen::pipeline::MutateMode::llm;
      if (needs_llm && build_gw.mock_file.empty() && !build_gw.live_configured()) {
        throw UsageError("this build needs an LLM: pass --mock-llm or set " +
                         scegen::llm::ProviderConfig{}.api_key_env);
      }
      if (!manifest_out.empty()) {
        scegen::pipeline::write_file_atomic(manifest_out,
                                            scegen::pipeline::to_json(m).dump(2) + "\n");
      }
      const auto gateway = needs_llm ? build_gw.gateway() : nullptr;
      const auto outputs = scegen::pipeline::run_build(m, gateway.get(), build_gw.config());
      if (json_out) {
        auto list = json::array();
        for (const auto& o : outputs) {
          json entry = {{"class_index", o.class_index},
                        {"label", scegen::logical::pattern_label(o.cls.pattern)},
                        {"files", o.files}};
          if (o.mutation) {
            entry["changed_fields"] = o.mutation->changed_fields;
            entry["rationale"] = o.mutation->rationale;
          }
          list.push_back(entry);
        }
        print_json({{"manifest", scegen::pipeline::to_json(m)}, {"outputs", list}});
      } else {
        for (const auto& o : outputs) {
          std::cout << "class " << o.class_index << " "
                    << scegen::logical::pattern_label(o.cls.pattern) << "\n";
          for (const auto& f : o.files) std::cout << "  wrote " << f << "\n";
          if (o.mutation) {
            std::cout << "  changed_fields:";
            if (o.mutation->changed_fields.empty()) std::cout << " (none)";
            for (const auto& f : o.mutation->changed_fields) std::cout << " " << f;
            std::cout << "\n  rationale: " << o.mutation->rationale << "\n";
          }
        }
      }
      return kExitOk;
    }

    if (*serve_cmd) {
      service_opts.provider = serve_gw.config();
      std::shared_ptr<const scegen::llm::Gateway> gateway;
      if (!serve_gw.mock_file.empty() || serve_gw.live_configured()) gateway = serve_gw.gateway();
      scegen::service::Service service(service_opts, gateway);
      scegen::service::serve(service, server_opts);
      return kExitOk;
    }

    if (*key_cmd) {
      const auto text = text_or_file(key_input);
      const auto req = key_schema == "functional" ? scegen::parsing::functional_request(text)
                                                  : scegen::parsing::danger_request(text);
      std::cout << scegen::llm::request_key(req) << "\n";
      return kExitOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const scegen::GatewayError& e) {
    std::cerr << "error: " << e.what() << " [" << scegen::to_string(e.kind()) << "]\n";
    for (const auto& raw : e.raw_responses()) std::cerr << "  raw: " << raw << "\n";
    return kExitDomain;
  } catch (const scegen::MutatorError& e) {
    std::cerr << "error: " << e.what() << "\n  raw: " << e.raw() << "\n";
    return kExitDomain;
  } catch (const scegen::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitUsage;
}
