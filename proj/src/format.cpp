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

#include "scegen/format.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include <openssl/evp.h>

#include "scegen/error.hpp"
#include "scegen/violation.hpp"

namespace scegen {

std::string format_number(double value) {
  if (value == 0.0) return "0";
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw Error("cannot format number");
  return std::string(buf.data(), end);
}

std::string format_number(long long value) { return std::to_string(value); }

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

double normalize_angle(double radians) {
  double r = std::fmod(radians, kTwoPi);
  if (r < 0) r += kTwoPi;
  if (r >= kTwoPi) r -= kTwoPi;
  return r;
}

double wrap_pi(double radians) {
  double r = normalize_angle(radians);
  return r > kPi ? r - kTwoPi : r;
}

const char* to_string(GatewayError::Kind kind) {
  switch (kind) {
    case GatewayError::Kind::transport: return "transport";
    case GatewayError::Kind::auth: return "auth";
    case GatewayError::Kind::schema: return "schema";
    case GatewayError::Kind::fixture: return "fixture";
  }
  return "unknown";
}

nlohmann::json to_json(const Violation& v) {
  return {{"path", v.path},
          {"rule", v.rule},
          {"observed", v.observed},
          {"bounds", v.bounds},
          {"repairable", v.repairable}};
}

nlohmann::json to_json(const std::vector<Violation>& vs) {
  auto arr = nlohmann::json::array();
  for (const auto& v : vs) arr.push_back(to_json(v));
  return arr;
}

}  // namespace scegen
