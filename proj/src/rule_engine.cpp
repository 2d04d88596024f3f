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


#include "heurex/rule_engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "heurex/error.hpp"
#include "json.hpp"
#include "text_util.hpp"

namespace heurex::rules {

using design::Bounds;
using design::Color;
using design::DesignNode;
using design::KindTag;

namespace {

constexpr std::string_view kConsistency = "Consistency and Standards";
constexpr std::string_view kLayout = "Layout";
constexpr std::string_view kReadability = "Readability";

std::string display_name(const DesignNode& node) {
  if (!design::is_placeholder_name(node.name)) return "\"" + node.name + "\"";
  return node.id;
}

std::string fmt(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", value);
  return buf;
}

// Count of values within epsilon of values[i], for every i. Values are
// visited in sorted order and the window is widened with the exact predicate.
std::vector<std::size_t> window_support(const std::vector<double>& values, double epsilon) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> sorted(n);
  for (std::size_t k = 0; k < n; ++k) sorted[k] = values[order[k]];

  std::vector<std::size_t> support(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = values[i];
    const double slack = epsilon + 1e-9 * (1.0 + std::abs(v));
    auto lo = std::lower_bound(sorted.begin(), sorted.end(), v - slack);
    auto hi = std::upper_bound(sorted.begin(), sorted.end(), v + slack);
    support[i] = static_cast<std::size_t>(
        std::count_if(lo, hi, [&](double w) { return std::abs(w - v) <= epsilon; }));
  }
  return support;
}

struct LineFit {
  double line = 0;
  std::size_t support = 0;
};

// Best-supported value; ties go to the smaller value.
LineFit modal_line(const std::vector<double>& values, const std::vector<std::size_t>& support) {
  LineFit best;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (support[i] > best.support || (support[i] == best.support && values[i] < best.line)) {
      best = {values[i], support[i]};
    }
  }
  return best;
}

struct Deviation {
  std::size_t index;
  double offset;
  LineFit fit;
};

std::vector<Deviation> isolated_values(const std::vector<double>& values, double epsilon) {
  std::vector<Deviation> out;
  if (values.size() < 2) return out;
  auto support = window_support(values, epsilon);
  LineFit fit = modal_line(values, support);
  if (fit.support < 2) return out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double offset = std::abs(values[i] - fit.line);
    if (support[i] == 1 && offset > epsilon) out.push_back({i, offset, fit});
  }
  return out;
}

struct Dimension {
  const char* rule_id;
  const char* label;
  std::function<double(const Bounds&)> read;
};

std::vector<RuleFinding> alignment_findings(NodeList siblings, const RuleConfig& cfg,
                                            std::span<const Dimension> dimensions) {
  std::vector<RuleFinding> findings;
  for (const auto& dim : dimensions) {
    std::vector<double> values;
    values.reserve(siblings.size());
    for (const DesignNode* node : siblings) values.push_back(dim.read(node->bounds));
    for (const auto& dev : isolated_values(values, cfg.epsilon_align)) {
      const DesignNode& node = *siblings[dev.index];
      RuleFinding f;
      f.rule_id = dim.rule_id;
      f.guideline = std::string(kConsistency);
      f.node_ids = {node.id};
      f.measurements = {{"offset", dev.offset},
                        {"line", dev.fit.line},
                        {"peers", static_cast<double>(dev.fit.support)}};
      f.message = std::string("The ") + dim.label + " of " + display_name(node) + " is " +
                  fmt(dev.offset) + "px off the line shared by " +
                  std::to_string(dev.fit.support) + " sibling elements.";
      findings.push_back(std::move(f));
    }
  }
  return findings;
}

const std::array<Dimension, 3> kEdges{{
    {"alignment.edge.left", "left edge", [](const Bounds& b) { return b.x; }},
    {"alignment.edge.right", "right edge", [](const Bounds& b) { return b.right(); }},
    {"alignment.edge.top", "top edge", [](const Bounds& b) { return b.y; }},
}};

const std::array<Dimension, 2> kCenters{{
    {"alignment.center.x", "horizontal center", [](const Bounds& b) { return b.center_x(); }},
    {"alignment.center.y", "vertical center", [](const Bounds& b) { return b.center_y(); }},
}};

}  // namespace

std::optional<double> RuleFinding::measurement(std::string_view name) const {
  for (const auto& m : measurements) {
    if (m.name == name) return m.value;
  }
  return std::nullopt;
}

RuleConfig parse_config(std::string_view text) {
  RuleConfig cfg;
  const std::map<std::string, double RuleConfig::*> fields = {
      {"epsilon_align", &RuleConfig::epsilon_align},
      {"epsilon_gap", &RuleConfig::epsilon_gap},
      {"min_contrast", &RuleConfig::min_contrast},
      {"overlap_min_fraction", &RuleConfig::overlap_min_fraction},
      {"align_near_miss", &RuleConfig::align_near_miss},
  };
  int line_number = 0;
  for (const auto& raw : text::split_lines(text)) {
    ++line_number;
    std::string line = raw.substr(0, raw.find('#'));
    line = text::trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::InvalidArgument,
                  "rule config line " + std::to_string(line_number) + ": expected key = value");
    }
    const std::string key = text::trim(line.substr(0, eq));
    const std::string value = text::trim(line.substr(eq + 1));
    auto it = fields.find(key);
    if (it == fields.end()) {
      throw Error(ErrorCode::InvalidArgument, "unknown rule config key: " + key, key);
    }
    double parsed = 0;
    try {
      std::size_t used = 0;
      parsed = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "bad number for " + key + ": " + value, key);
    }
    if (!std::isfinite(parsed) || parsed < 0) {
      throw Error(ErrorCode::InvalidArgument, key + " must be a nonnegative number", key);
    }
    cfg.*(it->second) = parsed;
  }
  if (cfg.overlap_min_fraction > 1.0) {
    throw Error(ErrorCode::InvalidArgument, "overlap_min_fraction must be within [0, 1]");
  }
  return cfg;
}

std::vector<RuleFinding> check_edge_alignment(NodeList siblings, const RuleConfig& cfg) {
  return alignment_findings(siblings, cfg, kEdges);
}

std::vector<RuleFinding> check_center_alignment(NodeList siblings, const RuleConfig& cfg) {
  return alignment_findings(siblings, cfg, kCenters);
}

std::optional<Axis> detect_stack_axis(NodeList siblings) {
  if (siblings.size() < 2) return std::nullopt;
  auto disjoint_along = [&](auto start, auto end) {
    std::vector<const DesignNode*> sorted(siblings.begin(), siblings.end());
    std::sort(sorted.begin(), sorted.end(), [&](const DesignNode* a, const DesignNode* b) {
      return start(a->bounds) < start(b->bounds);
    });
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
      if (end(sorted[i]->bounds) > start(sorted[i + 1]->bounds)) return false;
    }
    return true;
  };
  if (disjoint_along([](const Bounds& b) { return b.x; },
                     [](const Bounds& b) { return b.right(); })) {
    return Axis::Horizontal;
  }
  if (disjoint_along([](const Bounds& b) { return b.y; },
                     [](const Bounds& b) { return b.bottom(); })) {
    return Axis::Vertical;
  }
  return std::nullopt;
}

std::vector<RuleFinding> check_spacing(NodeList siblings, Axis axis, const RuleConfig& cfg) {
  std::vector<RuleFinding> findings;
  if (siblings.size() < 3) return findings;
  const bool horizontal = axis == Axis::Horizontal;
  auto start = [&](const DesignNode* n) { return horizontal ? n->bounds.x : n->bounds.y; };
  auto end = [&](const DesignNode* n) {
    return horizontal ? n->bounds.right() : n->bounds.bottom();
  };
  std::vector<const DesignNode*> sorted(siblings.begin(), siblings.end());
  std::sort(sorted.begin(), sorted.end(), [&](const DesignNode* a, const DesignNode* b) {
    if (start(a) != start(b)) return start(a) < start(b);
    if (end(a) != end(b)) return end(a) < end(b);
    return a->id < b->id;
  });
  std::vector<double> gaps;
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
    gaps.push_back(start(sorted[i + 1]) - end(sorted[i]));
  }
  std::vector<double> ordered = gaps;
  std::sort(ordered.begin(), ordered.end());
  const std::size_t m = ordered.size();
  const double median = m % 2 == 1 ? ordered[m / 2] : (ordered[m / 2 - 1] + ordered[m / 2]) / 2;
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    const double deviation = std::abs(gaps[i] - median);
    if (deviation <= cfg.epsilon_gap) continue;
    RuleFinding f;
    f.rule_id = horizontal ? "spacing.horizontal" : "spacing.vertical";
    f.guideline = std::string(kConsistency);
    f.node_ids = {sorted[i]->id, sorted[i + 1]->id};
    f.measurements = {{"gap", gaps[i]}, {"median_gap", median}, {"deviation", deviation}};
    f.message = "The gap between " + display_name(*sorted[i]) + " and " +
                display_name(*sorted[i + 1]) + " is " + fmt(gaps[i]) +
                "px while the other gaps in this " + (horizontal ? "row" : "column") +
                " are around " + fmt(median) + "px.";
    findings.push_back(std::move(f));
  }
  return findings;
}

std::vector<RuleFinding> check_size_consistency(NodeList siblings, const RuleConfig& cfg) {
  std::vector<RuleFinding> findings;
  std::map<std::string, std::vector<const DesignNode*>> by_kind;
  std::vector<std::string> kind_order;
  for (const DesignNode* node : siblings) {
    auto key = node->kind.wire_name();
    if (!by_kind.count(key)) kind_order.push_back(key);
    by_kind[key].push_back(node);
  }
  for (const auto& kind : kind_order) {
    const auto& group = by_kind[kind];
    if (group.size() < 2) continue;
    for (const bool width : {true, false}) {
      std::vector<double> values;
      for (const DesignNode* node : group) {
        values.push_back(width ? node->bounds.width : node->bounds.height);
      }
      for (const auto& dev : isolated_values(values, cfg.epsilon_align)) {
        const DesignNode& node = *group[dev.index];
        RuleFinding f;
        f.rule_id = width ? "size.width" : "size.height";
        f.guideline = std::string(kConsistency);
        f.node_ids = {node.id};
        f.measurements = {{width ? "width" : "height", values[dev.index]},
                          {"modal", dev.fit.line},
                          {"peers", static_cast<double>(dev.fit.support)}};
        f.message = display_name(node) + " is " + fmt(values[dev.index]) + "px " +
                    (width ? "wide" : "tall") + " while " + std::to_string(dev.fit.support) +
                    " other " + text::lower(kind) + " elements are " + fmt(dev.fit.line) + "px.";
        findings.push_back(std::move(f));
      }
    }
  }
  return findings;
}

namespace {

bool contains_node(const DesignNode& ancestor, const DesignNode* target) {
  for (const auto& child : ancestor.children) {
    if (&child == target || contains_node(child, target)) return true;
  }
  return false;
}

double intersection_area(const Bounds& a, const Bounds& b) {
  const double w = std::min(a.right(), b.right()) - std::max(a.x, b.x);
  const double h = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
  if (w <= 0 || h <= 0) return 0;
  return w * h;
}

}  // namespace

std::vector<RuleFinding> check_overlap(NodeList nodes, const RuleConfig& cfg) {
  const std::size_t n = nodes.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return nodes[a]->bounds.x < nodes[b]->bounds.x;
  });

  struct Hit {
    std::size_t first, second;
    double fraction;
  };
  std::vector<Hit> hits;
  // Sweep along x: only boxes starting before the current box ends can meet it.
  for (std::size_t k = 0; k < n; ++k) {
    const DesignNode* a = nodes[order[k]];
    if (a->bounds.area() <= 0) continue;
    for (std::size_t l = k + 1; l < n; ++l) {
      const DesignNode* b = nodes[order[l]];
      if (!(b->bounds.x < a->bounds.right())) break;
      if (b->bounds.area() <= 0) continue;
      const double inter = intersection_area(a->bounds, b->bounds);
      if (inter <= 0) continue;
      const double fraction = inter / std::min(a->bounds.area(), b->bounds.area());
      if (fraction <= cfg.overlap_min_fraction) continue;
      if (contains_node(*a, b) || contains_node(*b, a)) continue;
      hits.push_back({std::min(order[k], order[l]), std::max(order[k], order[l]), fraction});
    }
  }
  std::sort(hits.begin(), hits.end(), [](const Hit& x, const Hit& y) {
    return std::tie(x.first, x.second) < std::tie(y.first, y.second);
  });

  std::vector<RuleFinding> findings;
  for (const auto& hit : hits) {
    const DesignNode& a = *nodes[hit.first];
    const DesignNode& b = *nodes[hit.second];
    RuleFinding f;
    f.rule_id = "overlap";
    f.guideline = std::string(kLayout);
    f.node_ids = {a.id, b.id};
    f.measurements = {{"fraction", hit.fraction}};
    f.message = "The bounding boxes of " + display_name(a) + " and " + display_name(b) +
                " overlap by " + fmt(hit.fraction * 100) +
                "% of the smaller box; check whether the elements overlap visually.";
    findings.push_back(std::move(f));
  }
  return findings;
}

double relative_luminance(const Color& color) {
  auto linear = [](std::uint8_t channel) {
    const double c = channel / 255.0;
    return c <= 0.03928 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
  };
  return 0.2126 * linear(color.r) + 0.7152 * linear(color.g) + 0.0722 * linear(color.b);
}

double contrast_ratio(const Color& a, const Color& b) {
  const double la = relative_luminance(a);
  const double lb = relative_luminance(b);
  return (std::max(la, lb) + 0.05) / (std::min(la, lb) + 0.05);
}

Color composite(const Color& top, const Color& bottom) {
  const double alpha = std::clamp(top.a, 0.0, 1.0);
  auto mix = [&](std::uint8_t t, std::uint8_t b) {
    return static_cast<std::uint8_t>(std::lround(t * alpha + b * (1.0 - alpha)));
  };
  return {mix(top.r, bottom.r), mix(top.g, bottom.g), mix(top.b, bottom.b), 1.0};
}

namespace {

bool contains_bounds(const Bounds& outer, const Bounds& inner) {
  return outer.x <= inner.x && outer.y <= inner.y && outer.right() >= inner.right() &&
         outer.bottom() >= inner.bottom();
}

Color with_opacity(Color color, double opacity) {
  color.a *= opacity;
  return color;
}

}  // namespace

namespace {

// Leaves whose color paints the area they cover.
bool is_surface(const DesignNode& node) {
  const auto tag = node.kind.tag();
  return tag == KindTag::Rectangle || tag == KindTag::Button || tag == KindTag::Input;
}

}  // namespace

std::optional<Color> effective_background(const design::DesignDocument& doc,
                                          const DesignNode& node) {
  std::vector<const DesignNode*> path;
  for (const DesignNode* p = doc.parent_of(node.id); p != nullptr; p = doc.parent_of(p->id)) {
    path.push_back(p);
  }
  std::reverse(path.begin(), path.end());

  std::vector<Color> layers;
  for (std::size_t level = 0; level < path.size(); ++level) {
    const DesignNode* group = path[level];
    if (group->background) layers.push_back(with_opacity(*group->background, group->opacity));
    if (group->fill) layers.push_back(with_opacity(*group->fill, group->opacity));
    const DesignNode* on_path = level + 1 < path.size() ? path[level + 1] : &node;
    for (const auto& sibling : group->children) {
      if (&sibling == on_path) break;
      if (!is_surface(sibling) || !contains_bounds(sibling.bounds, node.bounds)) continue;
      const auto& surface = sibling.background ? sibling.background : sibling.fill;
      if (surface) layers.push_back(with_opacity(*surface, sibling.opacity));
    }
  }
  if (node.background) layers.push_back(with_opacity(*node.background, node.opacity));
  if (layers.empty()) return std::nullopt;

  Color result{255, 255, 255, 1.0};
  for (const auto& layer : layers) result = composite(layer, result);
  return result;
}

std::vector<RuleFinding> check_contrast(const DesignNode& text_node,
                                        const std::optional<Color>& background,
                                        const RuleConfig& cfg) {
  if (!text_node.fill) {
    throw Error(ErrorCode::MissingColor, "text node has no fill color: " + text_node.id,
                text_node.id);
  }
  if (!background) {
    throw Error(ErrorCode::MissingColor, "no background color behind " + text_node.id,
                text_node.id);
  }
  Color bg = *background;
  if (bg.a < 1.0) bg = composite(bg, Color{255, 255, 255, 1.0});
  Color fg = with_opacity(*text_node.fill, text_node.opacity);
  if (fg.a < 1.0) fg = composite(fg, bg);
  const double ratio = contrast_ratio(fg, bg);
  std::vector<RuleFinding> findings;
  if (ratio < cfg.min_contrast) {
    RuleFinding f;
    f.rule_id = "contrast.text";
    f.guideline = std::string(kReadability);
    f.node_ids = {text_node.id};
    f.measurements = {{"ratio", ratio}, {"minimum", cfg.min_contrast}};
    f.message = "The text " + display_name(text_node) + " (" + design::to_hex(fg) + " on " +
                design::to_hex(bg) + ") has a contrast ratio of " + fmt(ratio) + ":1, below " +
                fmt(cfg.min_contrast) + ":1.";
    findings.push_back(std::move(f));
  }
  return findings;
}

// ---------------------------------------------------------------------------
// Orchestration

namespace {

const std::vector<std::string_view>& guideline_candidates(std::string_view rule_id) {
  static const std::vector<std::string_view> kLayoutRules{kConsistency, kLayout};
  static const std::vector<std::string_view> kSizeRules{kConsistency, "Consistency"};
  static const std::vector<std::string_view> kOverlap{kLayout};
  static const std::vector<std::string_view> kContrast{kReadability};
  if (rule_id.rfind("size.", 0) == 0) return kSizeRules;
  if (rule_id == "overlap") return kOverlap;
  if (rule_id.rfind("contrast.", 0) == 0) return kContrast;
  return kLayoutRules;
}

std::optional<std::string> resolve_guideline(std::string_view rule_id,
                                             const std::vector<guidelines::GuidelineSet>& sets) {
  for (auto candidate : guideline_candidates(rule_id)) {
    for (const auto& set : sets) {
      if (const auto* g = set.find_by_name(candidate)) return g->name;
    }
  }
  return std::nullopt;
}

bool has_support(NodeList siblings, const DesignNode* node, double epsilon,
                 double (*read)(const Bounds&)) {
  const double v = read(node->bounds);
  for (const DesignNode* other : siblings) {
    if (other != node && std::abs(read(other->bounds) - v) <= epsilon) return true;
  }
  return false;
}

double read_center_x(const Bounds& b) { return b.center_x(); }
double read_center_y(const Bounds& b) { return b.center_y(); }

// Backdrops are children that fully contain another sibling, such as the
// rectangle behind a card's content.
bool is_backdrop(const DesignNode& child, const DesignNode& parent) {
  for (const auto& other : parent.children) {
    if (&other != &child && contains_bounds(child.bounds, other.bounds) &&
        child.bounds.area() > other.bounds.area()) {
      return true;
    }
  }
  return false;
}

void group_checks(const DesignNode& group, const RuleConfig& cfg,
                  std::vector<RuleFinding>& out) {
  std::vector<const DesignNode*> content;
  for (const auto& child : group.children) {
    if (!is_backdrop(child, group)) content.push_back(&child);
  }
  if (content.size() >= 2) {
    auto edges = check_edge_alignment(content, cfg);
    auto centers = check_center_alignment(content, cfg);
    auto far_off = [&](const RuleFinding& f) {
      return cfg.align_near_miss > 0 && f.measurement("offset").value_or(0) > cfg.align_near_miss;
    };
    std::set<std::pair<std::string, bool>> edge_flagged;  // (node, horizontal axis)
    for (auto& f : edges) {
      const DesignNode* node = nullptr;
      for (const DesignNode* c : content) {
        if (c->id == f.node_ids.front()) node = c;
      }
      const bool horizontal = f.rule_id != "alignment.edge.top";
      if (far_off(f)) continue;
      // Boxes of different sizes centered on their peers are aligned.
      if (has_support(content, node, cfg.epsilon_align,
                      horizontal ? read_center_x : read_center_y)) {
        continue;
      }
      edge_flagged.insert({node->id, horizontal});
      out.push_back(std::move(f));
    }
    for (auto& f : centers) {
      const bool horizontal = f.rule_id == "alignment.center.x";
      if (far_off(f) || edge_flagged.count({f.node_ids.front(), horizontal})) continue;
      out.push_back(std::move(f));
    }
  }
  if (content.size() >= 3) {
    if (auto axis = detect_stack_axis(content)) {
      // Only a broken rhythm is reported: most gaps must agree with the
      // median, otherwise the group simply has no regular spacing.
      auto gaps = check_spacing(content, *axis, cfg);
      const std::size_t regular = content.size() - 1 - gaps.size();
      if (regular >= 2 && regular > gaps.size()) {
        for (auto& f : gaps) out.push_back(std::move(f));
      }
    }
  }
  std::vector<const DesignNode*> sized;
  for (const DesignNode* c : content) {
    const auto tag = c->kind.tag();
    if (tag == KindTag::Icon || tag == KindTag::Button || tag == KindTag::Input) {
      sized.push_back(c);
    }
  }
  for (auto& f : check_size_consistency(sized, cfg)) out.push_back(std::move(f));
  std::vector<const DesignNode*> solid;
  for (const DesignNode* c : content) {
    if (c->kind.tag() != KindTag::Rectangle) solid.push_back(c);
  }
  for (auto& f : check_overlap(solid, cfg)) out.push_back(std::move(f));
}

}  // namespace

std::vector<RuleFinding> run_rules(const design::DesignDocument& doc,
                                   const std::vector<guidelines::GuidelineSet>& sets,
                                   const RuleConfig& cfg) {
  std::vector<RuleFinding> raw;
  for (const DesignNode* node : doc.preorder()) {
    if (node->kind.is_group() && !node->children.empty()) group_checks(*node, cfg, raw);
    if (node->kind.tag() == KindTag::Text && node->fill) {
      if (auto bg = effective_background(doc, *node)) {
        for (auto& f : check_contrast(*node, bg, cfg)) raw.push_back(std::move(f));
      }
    }
  }
  std::vector<RuleFinding> findings;
  for (auto& f : raw) {
    if (auto guideline = resolve_guideline(f.rule_id, sets)) {
      f.guideline = *guideline;
      findings.push_back(std::move(f));
    }
  }
  std::stable_sort(findings.begin(), findings.end(),
                   [&](const RuleFinding& a, const RuleFinding& b) {
                     auto pa = doc.preorder_index(a.node_ids.front()).value_or(0);
                     auto pb = doc.preorder_index(b.node_ids.front()).value_or(0);
                     return std::tie(pa, a.rule_id) < std::tie(pb, b.rule_id);
                   });
  return findings;
}

std::string findings_to_json(const std::vector<RuleFinding>& findings) {
  auto out = nlohmann::ordered_json::array();
  for (const auto& f : findings) {
    nlohmann::ordered_json measurements = nlohmann::ordered_json::object();
    for (const auto& m : f.measurements) measurements[m.name] = m.value;
    out.push_back({{"rule", f.rule_id},
                   {"guideline", f.guideline},
                   {"elements", f.node_ids},
                   {"measurements", measurements},
                   {"message", f.message}});
  }
  return out.dump(2);
}

}  // namespace heurex::rules
