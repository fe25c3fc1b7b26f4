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
#include <utility>
#include <vector>

namespace scegen::xml {

/// Output-side element tree. Attribute order is preserved so emission is byte-stable.
struct Element {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<Element> children;
  std::string text;

  explicit Element(std::string element_name) : name(std::move(element_name)) {}

  Element& attr(std::string key, std::string value);
  Element& attr(std::string key, double value);
  Element& attr(std::string key, int value);
  Element& add(Element child);
  /// Appends an empty child and returns a reference to it.
  Element& child(std::string child_name);
};

/// Serializes with an XML declaration, UTF-8, 2-space indentation and a trailing newline.
std::string to_string(const Element& root);

std::string escape(std::string_view raw);

/// Input-side node produced by `parse`.
struct Node {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<Node> children;
  std::string text;

  const std::string* find_attr(std::string_view key) const;
  std::string attr_or(std::string_view key, std::string fallback = {}) const;
  const Node* first(std::string_view child_name) const;
  std::vector<const Node*> all(std::string_view child_name) const;
  /// Depth-first search over all descendants.
  void collect(std::string_view element_name, std::vector<const Node*>& out) const;
  std::vector<const Node*> descendants(std::string_view element_name) const;
};

/// Parses a document and returns its root element. Throws XmlParseError with a line number.
Node parse(std::string_view text);

}  // namespace scegen::xml
