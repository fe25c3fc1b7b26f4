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

// File-backed session persistence: one JSON document per session.

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include <json.hpp>

namespace scegen::service {

class SessionStore {
 public:
  explicit SessionStore(std::string dir);

  const std::string& dir() const { return dir_; }

  std::optional<nlohmann::json> load(const std::string& id) const;
  /// Replaces the stored document atomically.
  void save(const std::string& id, const nlohmann::json& session) const;
  bool exists(const std::string& id) const;

  /// Serializes all requests touching one session.
  std::shared_ptr<std::mutex> lock_for(const std::string& id);

  /// Session ids are 32 lowercase hex digits; anything else is rejected before
  /// it reaches the filesystem.
  static bool valid_id(std::string_view id);
  static std::string new_id();

 private:
  std::string path_of(const std::string& id) const;

  std::string dir_;
  std::mutex locks_mutex_;
  std::map<std::string, std::shared_ptr<std::mutex>> locks_;
};

}  // namespace scegen::service
