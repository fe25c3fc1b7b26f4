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

#include <cmath>
#include <set>

#include "scegen/format.hpp"
#include "scegen/logical.hpp"
#include "scegen/xml.hpp"

namespace scegen::logical {

namespace {

constexpr double kSize = 400.0;
constexpr double kCenter = kSize / 2.0;
constexpr double kRing = 140.0;

struct Vec {
  double x, y;
};

// Entry 0 sits at the bottom; indices increase counter-clockwise on screen.
Vec entry_point(int entry, int n, double radius) {
  const double a = kPi / 2.0 + kTwoPi * entry / n;
  return {kCenter + radius * std::cos(a), kCenter + radius * std::sin(a)};
}

std::string fmt(double v) { return format_number(std::round(v * 100.0) / 100.0); }

}  // namespace

std::string render_svg(const LogicalScenario& scenario, const ConflictReport* conflicts) {
  const int n = scenario.num_entries;
  std::set<int> highlighted;
  if (conflicts) {
    for (const auto& p : conflicts->pairs) {
      if (p.kind == ConflictKind::crossing) {
        highlighted.insert(p.car_a);
        highlighted.insert(p.car_b);
      }
    }
  }

  xml::Element svg("svg");
  svg.attr("xmlns", "http://www.w3.org/2000/svg")
      .attr("width", fmt(kSize))
      .attr("height", fmt(kSize))
      .attr("viewBox", "0 0 400 400");
  auto& defs = svg.child("defs");
  auto& marker = defs.child("marker");
  marker.attr("id", "arrow")
      .attr("viewBox", "0 0 10 10")
      .attr("refX", "9")
      .attr("refY", "5")
      .attr("markerWidth", "6")
      .attr("markerHeight", "6")
      .attr("orient", "auto-start-reverse");
  marker.child("path").attr("d", "M 0 0 L 10 5 L 0 10 z").attr("fill", "context-stroke");

  svg.child("circle")
      .attr("cx", fmt(kCenter))
      .attr("cy", fmt(kCenter))
      .attr("r", fmt(kRing))
      .attr("fill", "none")
      .attr("stroke", "#bbbbbb")
      .attr("stroke-dasharray", "4 4");

  for (int e = 0; e < n; ++e) {
    const Vec inner = entry_point(e, n, kRing);
    const Vec outer = entry_point(e, n, kRing + 40.0);
    svg.child("line")
        .attr("x1", fmt(inner.x))
        .attr("y1", fmt(inner.y))
        .attr("x2", fmt(outer.x))
        .attr("y2", fmt(outer.y))
        .attr("stroke", "#555555")
        .attr("stroke-width", "8");
    const Vec label = entry_point(e, n, kRing + 52.0);
    auto& text = svg.child("text");
    text.attr("x", fmt(label.x))
        .attr("y", fmt(label.y))
        .attr("font-size", "12")
        .attr("text-anchor", "middle")
        .attr("class", "entry-label");
    text.text = "E" + std::to_string(e);
  }

  const auto exits = scenario.exits();
  const double c = static_cast<double>(scenario.moves.size());
  for (std::size_t i = 0; i < scenario.moves.size(); ++i) {
    const auto& m = scenario.moves[i];
    const Vec from = entry_point(m.entry, n, kRing);
    const Vec to = entry_point(exits[i], n, kRing);
    // Spread the control points so cars sharing a route stay distinguishable.
    const double spread = c > 1 ? (static_cast<double>(i) / (c - 1) - 0.5) * 60.0 : 0.0;
    const Vec ctrl{kCenter + spread, kCenter - spread};
    const bool hot = highlighted.count(m.car_id) > 0;
    svg.child("path")
        .attr("d", "M " + fmt(from.x) + " " + fmt(from.y) + " Q " + fmt(ctrl.x) + " " +
                       fmt(ctrl.y) + " " + fmt(to.x) + " " + fmt(to.y))
        .attr("fill", "none")
        .attr("stroke", hot ? "#d62728" : "#1f77b4")
        .attr("stroke-width", "2.5")
        .attr("marker-end", "url(#arrow)")
        .attr("class", "car-arrow")
        .attr("data-car", m.car_id)
        .attr("data-entry", m.entry)
        .attr("data-exit", exits[i]);
  }

  auto& caption = svg.child("text");
  caption.attr("x", "8").attr("y", "18").attr("font-size", "13");
  caption.text = pattern_label(movement_pattern(scenario));

  std::string out = xml::to_string(svg);
  // Drop the XML declaration; SVG is usually inlined.
  return out.substr(out.find('\n') + 1);
}

}  // namespace scegen::logical
