// Copyright 2026 The heurex Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "heurex/design_tree.hpp"
#include "heurex/guidelines.hpp"

namespace heurex::rules {

/// Tolerances for the layout checks, in pixels unless noted.
struct RuleConfig {
  double epsilon_align = 1.0;
  double epsilon_gap = 2.0;
  double min_contrast = 4.5;         // WCAG ratio
  double overlap_min_fraction = 0.05;  // intersection / smaller area
  /// run_rules drops alignment findings whose offset exceeds this; such
  /// elements are placed deliberately rather than slightly off. 0 keeps all.
  double align_near_miss = 6.0;

  bool operator==(const RuleConfig&) const = default;
};

/// Reads "key = value" lines ('#' starts a comment). Keys are the field
/// names above. Throws Error(InvalidArgument) on unknown keys, unparsable
/// or negative values.
RuleConfig parse_config(std::string_view text);

struct Measurement {
  std::string name;
  double value = 0;

  bool operator==(const Measurement&) const = default;
};

struct RuleFinding {
  std::string rule_id;
  std::string guideline;
  std::vector<std::string> node_ids;
  std::vector<Measurement> measurements;
  std::string message;

  std::optional<double> measurement(std::string_view name) const;
  bool operator==(const RuleFinding&) const = default;
};

using NodeList = std::span<const design::DesignNode* const>;

enum class Axis { Horizontal, Vertical };

/// Left, right and top edges. A node is flagged when its edge is shared with
/// no other sibling (within epsilon_align) while some edge line is shared by
/// at least two siblings; the offset is measured to the best-supported line.
std::vector<RuleFinding> check_edge_alignment(NodeList siblings, const RuleConfig& cfg);

/// Same rule on center-x and center-y, so boxes of different sizes sharing
/// a center are aligned.
std::vector<RuleFinding> check_center_alignment(NodeList siblings, const RuleConfig& cfg);

/// Row if the siblings do not overlap horizontally, column if they do not
/// overlap vertically, otherwise nullopt.
std::optional<Axis> detect_stack_axis(NodeList siblings);

/// Sorts along `axis`, then flags consecutive gaps that differ from the
/// median gap by more than epsilon_gap. Needs at least three siblings.
std::vector<RuleFinding> check_spacing(NodeList siblings, Axis axis, const RuleConfig& cfg);

/// Compares widths and heights within each node kind only.
std::vector<RuleFinding> check_size_consistency(NodeList siblings, const RuleConfig& cfg);

/// Pairs whose intersection covers more than overlap_min_fraction of the
/// smaller box. Ancestor/descendant pairs and empty boxes are skipped.
std::vector<RuleFinding> check_overlap(NodeList nodes, const RuleConfig& cfg);

double relative_luminance(const design::Color& color);
/// WCAG contrast ratio; alpha is ignored.
double contrast_ratio(const design::Color& a, const design::Color& b);
/// `top` over an opaque `bottom`; channels rounded to the nearest integer.
design::Color composite(const design::Color& top, const design::Color& bottom);

/// Composites, bottom to top, the background and fill of each ancestor and
/// any earlier Rectangle sibling on the path whose bounds contain the node,
/// then the node's own background. A translucent bottom layer sits on white.
/// nullopt when no layer has a color.
std::optional<design::Color> effective_background(const design::DesignDocument& doc,
                                                  const design::DesignNode& node);

/// Throws Error(MissingColor) when the node has no fill or no background.
std::vector<RuleFinding> check_contrast(const design::DesignNode& text_node,
                                        const std::optional<design::Color>& background,
                                        const RuleConfig& cfg);

/// Runs every check whose guideline exists in one of `sets`, group by group
/// in preorder. Findings are ordered by the preorder position of their first
/// node, then rule id.
std::vector<RuleFinding> run_rules(const design::DesignDocument& doc,
                                   const std::vector<guidelines::GuidelineSet>& sets,
                                   const RuleConfig& cfg = {});

std::string findings_to_json(const std::vector<RuleFinding>& findings);

}  // namespace heurex::rules
