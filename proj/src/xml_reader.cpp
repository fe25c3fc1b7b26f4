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

#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "scegen/error.hpp"
#include "scegen/xml.hpp"

namespace scegen::xml {

namespace pt = boost::property_tree;

const std::string* Node::find_attr(std::string_view key) const {
  for (const auto& [k, v] : attributes) {
    if (k == key) return &v;
  }
  return nullptr;
}

std::string Node::attr_or(std::string_view key, std::string fallback) const {
  const auto* v = find_attr(key);
  return v ? *v : fallback;
}

const Node* Node::first(std::string_view child_name) const {
  for (const auto& c : children) {
    if (c.name == child_name) return &c;
  }
  return nullptr;
}

std::vector<const Node*> Node::all(std::string_view child_name) const {
  std::vector<const Node*> out;
  for (const auto& c : children) {
    if (c.name == child_name) out.push_back(&c);
  }
  return out;
}

void Node::collect(std::string_view element_name, std::vector<const Node*>& out) const {
  for (const auto& c : children) {
    if (c.name == element_name) out.push_back(&c);
    c.collect(element_name, out);
  }
}

std::vector<const Node*> Node::descendants(std::string_view element_name) const {
  std::vector<const Node*> out;
  collect(element_name, out);
  return out;
}

namespace {

Node convert(const std::string& name, const pt::ptree& tree) {
  Node node;
  node.name = name;
  node.text = tree.data();
  for (const auto& [key, sub] : tree) {
    if (key == "<xmlattr>") {
      for (const auto& [ak, av] : sub) node.attributes.emplace_back(ak, av.data());
    } else if (key == "<xmlcomment>") {
      continue;
    } else {
      node.children.push_back(convert(key, sub));
    }
  }
  return node;
}

}  // namespace

Node parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  pt::ptree tree;
  try {
    pt::read_xml(in, tree, pt::xml_parser::trim_whitespace);
  } catch (const pt::xml_parser_error& e) {
    throw XmlParseError("malformed XML at line " + std::to_string(e.line()) + ": " + e.message(),
                        static_cast<long>(e.line()));
  }
  for (const auto& [key, sub] : tree) {
    if (key == "<xmlcomment>") continue;
    return convert(key, sub);
  }
  throw XmlParseError("document has no root element", 0);
}

}  // namespace scegen::xml
