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

#include "scegen/service.hpp"

namespace scegen::service {

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;
  /// Static UI bundle served at /; empty disables static serving.
  std::string ui_dir;
};

/// Blocks serving `service` until the process is stopped.
void serve(Service& service, const ServerOptions& options);

}  // namespace scegen::service
