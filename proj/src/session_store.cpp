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

#include "scegen/session_store.hpp"

#include <filesystem>
#include <fstream>
#include <random>

#include "scegen/error.hpp"
#include "scegen/pipeline.hpp"

namespace scegen::service {

namespace fs = std::filesystem;

SessionStore::SessionStore(std::string dir) : dir_(std::move(dir)) {
  fs::create_directories(dir_);
}

std::string SessionStore::path_of(const std::string& id) const {
  return (fs::path(dir_) / (id + ".json")).string();
}

bool SessionStore::valid_id(std::string_view id) {
  if (id.size() != 32) return false;
  for (char c : id) {
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
  }
  return true;
}

std::string SessionStore::new_id() {
  static thread_local std::mt19937_64 gen{std::random_device{}()};
  static constexpr char kHex[] = "0123456789abcdef";
  std::string id;
  for (int half = 0; half < 2; ++half) {
    auto v = gen();
    for (int i = 0; i < 16; ++i, v >>= 4) id.push_back(kHex[v & 0xF]);
  }
  return id;
}

bool SessionStore::exists(const std::string& id) const {
  return valid_id(id) && fs::exists(path_of(id));
}

std::optional<nlohmann::json> SessionStore::load(const std::string& id) const {
  if (!exists(id)) return std::nullopt;
  const auto text = pipeline::read_file(path_of(id));
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error("session " + id + " is corrupt: " + e.what());
  }
}

void SessionStore::save(const std::string& id, const nlohmann::json& session) const {
  if (!valid_id(id)) throw DomainError("invalid session id");
  pipeline::write_file_atomic(path_of(id), session.dump(1) + "\n");
}

std::shared_ptr<std::mutex> SessionStore::lock_for(const std::string& id) {
  std::lock_guard guard(locks_mutex_);
  auto& slot = locks_[id];
  if (!slot) slot = std::make_shared<std::mutex>();
  return slot;
}

}  // namespace scegen::service
