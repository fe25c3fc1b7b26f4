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

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace scegen {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument is outside the domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Raw enumeration would exceed the configured scenario cap.
class CapacityError : public Error {
 public:
  CapacityError(std::string what, unsigned long long requested, unsigned long long cap)
      : Error(std::move(what)), requested_(requested), cap_(cap) {}
  unsigned long long requested() const { return requested_; }
  unsigned long long cap() const { return cap_; }

 private:
  unsigned long long requested_;
  unsigned long long cap_;
};

class GeometryError : public Error {
 public:
  using Error::Error;
};

/// A caller broke an operation's precondition (mismatched inputs, dirty parameters).
class ContractError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Repair cannot fix structural violations; `fields` lists the offending locators.
class RepairError : public Error {
 public:
  RepairError(std::string what, std::vector<std::string> fields)
      : Error(std::move(what)), fields_(std::move(fields)) {}
  const std::vector<std::string>& fields() const { return fields_; }

 private:
  std::vector<std::string> fields_;
};

class XmlParseError : public Error {
 public:
  XmlParseError(std::string what, long line) : Error(std::move(what)), line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

/// Stage-1 extraction failed; `raw` carries the offending payload when there is one.
class ParseError : public Error {
 public:
  explicit ParseError(std::string what, std::string raw = {})
      : Error(std::move(what)), raw_(std::move(raw)) {}
  const std::string& raw() const { return raw_; }

 private:
  std::string raw_;
};

class GatewayError : public Error {
 public:
  enum class Kind { transport, auth, schema, fixture };

  GatewayError(Kind kind, std::string what, std::vector<std::string> raw_responses = {})
      : Error(std::move(what)), kind_(kind), raw_(std::move(raw_responses)) {}
  Kind kind() const { return kind_; }
  const std::vector<std::string>& raw_responses() const { return raw_; }

 private:
  Kind kind_;
  std::vector<std::string> raw_;
};

const char* to_string(GatewayError::Kind kind);

/// The LLM mutator could not produce a usable overlay.
class MutatorError : public Error {
 public:
  MutatorError(std::string what, std::string raw) : Error(std::move(what)), raw_(std::move(raw)) {}
  const std::string& raw() const { return raw_; }

 private:
  std::string raw_;
};

}  // namespace scegen
