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
#include <string_view>

namespace scegen {

/// Shortest round-trip decimal form of `value`; `-0` prints as `0`.
std::string format_number(double value);

std::string format_number(long long value);

/// Hex SHA-256 digest.
std::string sha256_hex(std::string_view data);

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

inline constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Wraps to [0, 2π).
double normalize_angle(double radians);

/// Wraps to (-π, π].
double wrap_pi(double radians);

}  // namespace scegen
