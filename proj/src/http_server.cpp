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

#include "scegen/http_server.hpp"

#include <iostream>

#include <httplib.h>

#include "scegen/error.hpp"

namespace scegen::service {

void serve(Service& service, const ServerOptions& options) {
  httplib::Server server;
  if (!options.ui_dir.empty() && !server.set_mount_point("/", options.ui_dir)) {
    throw DomainError("UI directory " + options.ui_dir + " does not exist");
  }
  const auto dispatch = [&service](const httplib::Request& in, httplib::Response& out) {
    Request req;
    req.method = in.method;
    req.path = in.path;
    req.body = in.body;
    for (const auto& [k, v] : in.params) req.query.emplace(k, v);
    const auto res = service.handle(req);
    out.status = res.status;
    for (const auto& [k, v] : res.headers) out.set_header(k, v);
    out.set_content(res.body, res.content_type);
  };
  const char* pattern = R"(/v1/.*)";
  server.Get(pattern, dispatch);
  server.Post(pattern, dispatch);
  server.Put(pattern, dispatch);
  if (!server.bind_to_port(options.host, options.port)) {
    throw Error("cannot listen on " + options.host + ":" + std::to_string(options.port));
  }
  std::cerr << "scegen: listening on http://" << options.host << ":" << options.port << "\n";
  server.listen_after_bind();
}

}  // namespace scegen::service
